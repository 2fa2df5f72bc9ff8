//! Correlation functions of the interacting model: the Wick-exponential
//! phase factors, the C and A correlation matrices, (det)^{-1/2} factors,
//! free-Dirac Wick pairing, the Gaussian-integral identities behind the
//! determinant formulas, and the fundamental length.

use num_complex::Complex;

use crate::dense::{inverse_real, sym_eigenvalues, Cholesky, LuComplex};
use crate::dirac::{continuum_dirac_kernel, lattice_dirac_propagator_accel};
use crate::error::{Error, Result};
use crate::lattice::{LatticeParams, LatticeSite};
use crate::quad::tensor_gl;
use crate::scalar::{continuum_schwinger, lattice_propagator_accel, wightman_minus};
use crate::C64;

/// Physical parameters of the model: coupling l (dimension of length) and
/// the two masses.
#[derive(Debug, Copy, Clone)]
pub struct ModelParams {
    pub coupling_l: f64,
    pub mass_scalar: f64,
    pub mass_dirac: f64,
}

impl ModelParams {
    pub fn fundamental_length(&self) -> f64 {
        fundamental_length(self.coupling_l)
    }
}

/// The fundamental length l / (sqrt(2) pi): below this contour height the
/// interacting kernel (1 - 4 l^4 D^2)^{-1/2} loses analyticity.
pub fn fundamental_length(l: f64) -> f64 {
    l / (2.0f64.sqrt() * std::f64::consts::PI)
}

/// Sign label of a Wick-exponential insertion. `Minus` carries the phase
/// exp(-i pi/4) and builds exp(+i l^2 phi^2) (the psi-type factor);
/// `Plus` carries exp(+i pi/4) and builds exp(-i l^2 phi^2) (psi-bar).
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum FieldSign {
    Minus,
    Plus,
}

impl FieldSign {
    /// Phase exp(+- i pi/4).
    pub fn phase(&self) -> C64 {
        match self {
            FieldSign::Minus => Complex::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
            FieldSign::Plus => Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4),
        }
    }

    /// Complex conjugation swaps the two signs.
    pub fn conjugate(&self) -> FieldSign {
        match self {
            FieldSign::Minus => FieldSign::Plus,
            FieldSign::Plus => FieldSign::Minus,
        }
    }

    /// Dirac role carried along: Minus inserts psi, Plus inserts psi-bar.
    pub fn is_psi(&self) -> bool {
        matches!(self, FieldSign::Minus)
    }
}

impl std::str::FromStr for FieldSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "-" | "minus" | "psi" | "1" => Ok(FieldSign::Minus),
            "+" | "plus" | "psibar" | "2" => Ok(FieldSign::Plus),
            other => Err(Error::UnknownScheme(other.to_string())),
        }
    }
}

/// Which two-point function feeds the Euclidean matrices: the continuum
/// Schwinger function or the lattice one at given geometry.
#[derive(Debug, Copy, Clone)]
pub enum SchwingerBackend {
    Continuum,
    Lattice(LatticeParams),
}

impl SchwingerBackend {
    fn scalar(&self, m: f64, dx: [f64; 4]) -> Result<f64> {
        match self {
            SchwingerBackend::Continuum => continuum_schwinger(m, dx),
            SchwingerBackend::Lattice(params) => {
                let site = snap_to_site(params, dx)?;
                Ok(lattice_propagator_accel(params, m, &site).re)
            }
        }
    }

    fn dirac(&self, m: f64, dx: [f64; 4]) -> Result<crate::SpinorMatrix> {
        match self {
            SchwingerBackend::Continuum => crate::dirac::continuum_dirac_schwinger(m, dx),
            SchwingerBackend::Lattice(params) => {
                let site = snap_to_site(params, dx)?;
                lattice_dirac_propagator_accel(params, m, &site)
            }
        }
    }
}

fn snap_to_site(params: &LatticeParams, x: [f64; 4]) -> Result<LatticeSite> {
    let mut j = [0i64; 4];
    for mu in 0..4 {
        let k = (x[mu] / params.delta).round();
        if (x[mu] - k * params.delta).abs() > 1e-9 * params.delta {
            return Err(Error::OffLattice { x });
        }
        j[mu] = k as i64;
    }
    Ok(LatticeSite::new(params, j))
}

/// A complexified insertion point z = (x0 - i eps, x_vec). Only differences
/// of `eps` enter the kernels, so any real offset is allowed; the tube
/// condition requires `eps` strictly decreasing along the insertion order.
#[derive(Debug, Copy, Clone)]
pub struct TubePoint {
    pub x: [f64; 4],
    pub eps: f64,
}

/// Which matrix a [`CorrelationMatrix`] is: C (Euclidean, built on the
/// Schwinger function) or A (Minkowski tube, built on the Wightman boundary
/// value).
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum CorrelationKind {
    Euclidean,
    MinkowskiTube,
}

/// Symmetric n x n matrix with unit diagonal: the paper's C and A.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub n: usize,
    pub kind: CorrelationKind,
    entries: Vec<C64>,
    /// Largest off-diagonal entry (j, k, |entry|, separation measure) for
    /// error reporting; separation is the Euclidean distance for C, the
    /// imaginary-time gap for A.
    worst_pair: Option<(usize, usize, f64, f64)>,
}

impl CorrelationMatrix {
    fn from_offdiagonal<F>(n: usize, kind: CorrelationKind, mut pair: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<(C64, f64)>,
    {
        let mut entries = vec![Complex::new(0.0, 0.0); n * n];
        let mut worst: Option<(usize, usize, f64, f64)> = None;
        for j in 0..n {
            entries[j * n + j] = Complex::new(1.0, 0.0);
            for k in j + 1..n {
                let (v, sep) = pair(j, k)?;
                entries[j * n + k] = v;
                entries[k * n + j] = v;
                if worst.map_or(true, |(_, _, best, _)| v.norm() > best) {
                    worst = Some((j, k, v.norm(), sep));
                }
            }
        }
        Ok(CorrelationMatrix {
            n,
            kind,
            entries,
            worst_pair: worst,
        })
    }

    pub fn entry(&self, j: usize, k: usize) -> C64 {
        self.entries[j * self.n + k]
    }

    pub fn det(&self) -> C64 {
        if self.n == 0 {
            return Complex::new(1.0, 0.0);
        }
        LuComplex::factor(&self.entries, self.n)
            .map(|lu| lu.det())
            .unwrap_or_else(|_| Complex::new(0.0, 0.0))
    }

    /// P_n = det - 1, the polynomial part of the determinant expansion.
    pub fn p_n(&self) -> C64 {
        self.det() - 1.0
    }
}

/// Build the Euclidean matrix C: c_jk = 2 exp(i (r_j + r_k) pi/4) l^2 S(y_j - y_k).
pub fn build_c(
    points: &[[f64; 4]],
    signs: &[FieldSign],
    model: &ModelParams,
    backend: &SchwingerBackend,
) -> Result<CorrelationMatrix> {
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptyInput("points"));
    }
    assert_eq!(signs.len(), n, "one sign per insertion point");
    for j in 0..n {
        for k in j + 1..n {
            if points[j] == points[k] {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    let l2 = model.coupling_l * model.coupling_l;
    CorrelationMatrix::from_offdiagonal(n, CorrelationKind::Euclidean, |j, k| {
        let dx = [
            points[j][0] - points[k][0],
            points[j][1] - points[k][1],
            points[j][2] - points[k][2],
            points[j][3] - points[k][3],
        ];
        let s = backend.scalar(model.mass_scalar, dx)?;
        let sep = dx.iter().map(|d| d * d).sum::<f64>().sqrt();
        Ok((signs[j].phase() * signs[k].phase() * 2.0 * l2 * s, sep))
    })
}

/// Build the tube matrix A: a_jk = 2 exp(i (r_j + r_k) pi/4) l^2 D^(-)(z_j - z_k),
/// with z_j - z_k evaluated at imaginary-time gap eps_j - eps_k > 0 for j < k.
pub fn build_a(
    points: &[TubePoint],
    signs: &[FieldSign],
    model: &ModelParams,
) -> Result<CorrelationMatrix> {
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptyInput("points"));
    }
    assert_eq!(signs.len(), n, "one sign per insertion point");
    for j in 0..n {
        for k in j + 1..n {
            let gap = points[j].eps - points[k].eps;
            if gap <= 0.0 {
                return Err(Error::TubeOrdering { j, k, gap });
            }
        }
    }
    let l2 = model.coupling_l * model.coupling_l;
    CorrelationMatrix::from_offdiagonal(n, CorrelationKind::MinkowskiTube, |j, k| {
        let gap = points[j].eps - points[k].eps;
        let d = wightman_minus(
            model.mass_scalar,
            points[j].x[0] - points[k].x[0],
            gap,
            [
                points[j].x[1] - points[k].x[1],
                points[j].x[2] - points[k].x[2],
                points[j].x[3] - points[k].x[3],
            ],
        )?;
        Ok((signs[j].phase() * signs[k].phase() * 2.0 * l2 * d, gap))
    })
}

/// The determinant factor of the interacting n-point functions.
#[derive(Debug, Copy, Clone)]
pub struct DetFactor {
    /// (det)^{-1/2}, principal branch.
    pub value: C64,
    /// P_n = det - 1.
    pub p_n: C64,
}

/// Principal-branch (det)^{-1/2} with the |P_n| < 1 guard that keeps the
/// determinant inside the open disc around 1 (so Re det > 0 and the branch
/// is unambiguous).
pub fn det_inverse_sqrt(matrix: &CorrelationMatrix) -> Result<DetFactor> {
    let det = matrix.det();
    let p_n = det - 1.0;
    if p_n.norm() >= 1.0 {
        let (j, k, entry_abs, gap) = matrix.worst_pair.unwrap_or((0, 0, 0.0, 0.0));
        return Err(Error::AnalyticityViolation {
            p_n_abs: p_n.norm(),
            j,
            k,
            entry_abs,
            gap,
        });
    }
    Ok(DetFactor {
        value: det.sqrt().finv(),
        p_n,
    })
}

/// Closed form of the two-point Wick-exponential correlation,
/// (1 - 4 l^4 S^2)^{-1/2}, guarded by |2 l^2 S| < 1.
pub fn wick_two_point(l: f64, s: f64) -> Result<C64> {
    let c = 2.0 * l * l * s;
    if c.abs() >= 1.0 {
        return Err(Error::WickThreshold(c.abs()));
    }
    Ok(Complex::new(1.0 / (1.0 - c * c).sqrt(), 0.0))
}

/// The same value by direct two-dimensional Gaussian quadrature of
/// (2 pi)^{-1} iint exp(-(t^2+s^2)/2) exp(-2 t s l^2 S) dt ds.
pub fn wick_two_point_quadrature(l: f64, s: f64) -> Result<C64> {
    let c = 2.0 * l * l * s;
    if c.abs() >= 1.0 {
        return Err(Error::WickThreshold(c.abs()));
    }
    // The soft direction decays like exp(-(1-|c|) u^2 / 2).
    let half_width = (84.0 / (1.0 - c.abs())).sqrt();
    let points = ((4.0 * half_width) as usize).max(64);
    let f = |x: &[f64]| {
        let (t, u) = (x[0], x[1]);
        Complex::new((-(t * t + u * u) / 2.0 - c * t * u).exp(), 0.0)
    };
    let v = tensor_gl(&f, &[-half_width; 2], &[half_width; 2], points);
    Ok(v / (2.0 * std::f64::consts::PI))
}

/// Result of a Gaussian integral identity check.
#[derive(Debug, Copy, Clone)]
pub struct IdentityCheck {
    pub lhs: C64,
    pub rhs: C64,
    pub diff: f64,
}

/// Cap on the quadrature dimension of the identity checks.
pub const IDENTITY_DIM_CAP: usize = 4;

fn quadrature_box(lambda: &[f64], n: usize) -> Result<(f64, usize)> {
    if n > IDENTITY_DIM_CAP {
        return Err(Error::DimensionCap(n, IDENTITY_DIM_CAP));
    }
    // SPD check and decay scale.
    Cholesky::factor(lambda, n)?;
    let eigs = sym_eigenvalues(lambda, n);
    let lambda_min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let half_width = (84.0 / lambda_min).sqrt();
    let points = ((4.0 * half_width) as usize).max(48);
    Ok((half_width, points))
}

/// Identity (A): (2 pi)^{-n/2} sqrt(det L) int exp(i(y,x)) exp(-(x,Lx)/2) dx
/// equals exp(-(y, L^{-1} y)/2). Left side by tensor quadrature.
pub fn gaussian_identity_check_a(lambda: &[f64], n: usize, y: &[f64]) -> Result<IdentityCheck> {
    assert_eq!(lambda.len(), n * n);
    assert_eq!(y.len(), n);
    let (half_width, points) = quadrature_box(lambda, n)?;
    let det = crate::dense::det_real(lambda, n)?;
    let inv = inverse_real(lambda, n)?;

    let f = |x: &[f64]| {
        let mut quad = 0.0;
        let mut phase = 0.0;
        for i in 0..n {
            phase += y[i] * x[i];
            for j in 0..n {
                quad += x[i] * lambda[i * n + j] * x[j];
            }
        }
        Complex::from_polar((-0.5 * quad).exp(), phase)
    };
    let lo = vec![-half_width; n];
    let hi = vec![half_width; n];
    let integral = tensor_gl(&f, &lo, &hi, points);
    let lhs = integral * det.sqrt() / (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0);

    let mut yinvy = 0.0;
    for i in 0..n {
        for j in 0..n {
            yinvy += y[i] * inv[i * n + j] * y[j];
        }
    }
    let rhs = Complex::new((-0.5 * yinvy).exp(), 0.0);
    Ok(IdentityCheck {
        lhs,
        rhs,
        diff: (lhs - rhs).norm(),
    })
}

/// Identity (B): (2 pi)^{-n/2} sqrt(det L) int (x, A x) exp(-(x,Lx)/2) dx
/// equals Tr(A L^{-1}).
pub fn gaussian_identity_check_b(
    lambda: &[f64],
    n: usize,
    a_mat: &[f64],
) -> Result<IdentityCheck> {
    assert_eq!(lambda.len(), n * n);
    assert_eq!(a_mat.len(), n * n);
    let (half_width, points) = quadrature_box(lambda, n)?;
    let det = crate::dense::det_real(lambda, n)?;
    let inv = inverse_real(lambda, n)?;

    let f = |x: &[f64]| {
        let mut quad = 0.0;
        let mut xax = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += x[i] * lambda[i * n + j] * x[j];
                xax += x[i] * a_mat[i * n + j] * x[j];
            }
        }
        Complex::new(xax * (-0.5 * quad).exp(), 0.0)
    };
    let lo = vec![-half_width; n];
    let hi = vec![half_width; n];
    let integral = tensor_gl(&f, &lo, &hi, points);
    let lhs = integral * det.sqrt() / (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0);

    let mut trace = 0.0;
    for i in 0..n {
        for j in 0..n {
            trace += a_mat[i * n + j] * inv[j * n + i];
        }
    }
    let rhs = Complex::new(trace, 0.0);
    Ok(IdentityCheck {
        lhs,
        rhs,
        diff: (lhs - rhs).norm(),
    })
}

/// Free-Dirac n-point value by the Wick-pairing determinant. `pair(a, b)`
/// is the two-point contraction of the a-th psi insertion with the b-th
/// psi-bar insertion (indices into the original sequence). Returns exact 0
/// when the psi / psi-bar counts differ (charge conservation).
pub fn wick_pairing_determinant<F>(roles_psi: &[bool], mut pair: F) -> Result<C64>
where
    F: FnMut(usize, usize) -> Result<C64>,
{
    let psis: Vec<usize> = (0..roles_psi.len()).filter(|&i| roles_psi[i]).collect();
    let bars: Vec<usize> = (0..roles_psi.len()).filter(|&i| !roles_psi[i]).collect();
    if psis.len() != bars.len() {
        return Ok(Complex::new(0.0, 0.0));
    }
    let k = psis.len();
    if k == 0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    let mut matrix = vec![Complex::new(0.0, 0.0); k * k];
    for (a, &ia) in psis.iter().enumerate() {
        for (b, &jb) in bars.iter().enumerate() {
            matrix[a * k + b] = pair(ia, jb)?;
        }
    }
    let det = LuComplex::factor(&matrix, k)
        .map(|lu| lu.det())
        .unwrap_or_else(|_| Complex::new(0.0, 0.0));
    // Sign: sort the sequence into (all psi, then all psi-bar), then the
    // block-ordered expectation carries (-1)^{k(k-1)/2} relative to det.
    let concat: Vec<usize> = psis.iter().chain(bars.iter()).cloned().collect();
    let mut inversions = 0usize;
    for i in 0..concat.len() {
        for j in i + 1..concat.len() {
            if concat[i] > concat[j] {
                inversions += 1;
            }
        }
    }
    let mut sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
    if (k * (k - 1) / 2) % 2 == 1 {
        sign = -sign;
    }
    Ok(det * sign)
}

/// Interacting n-point value together with its factors.
#[derive(Debug, Copy, Clone)]
pub struct NPointValue {
    pub value: C64,
    pub det_factor: C64,
    pub p_n: C64,
    /// Free-field factor (1 when no spinor insertions are requested).
    pub free_factor: C64,
}

/// n-point Schwinger function of the interacting field:
/// (det C)^{-1/2} times the free-Dirac Wick-pairing factor. An empty
/// `alphas` list computes the pure Wick-exponential (rho-field) case.
pub fn npoint_schwinger(
    points: &[[f64; 4]],
    signs: &[FieldSign],
    alphas: &[usize],
    model: &ModelParams,
    backend: &SchwingerBackend,
) -> Result<NPointValue> {
    let det = det_inverse_sqrt(&build_c(points, signs, model, backend)?)?;
    let free_factor = if alphas.is_empty() {
        Complex::new(1.0, 0.0)
    } else {
        if alphas.len() != points.len() {
            return Err(Error::SpinorIndexCount {
                got: alphas.len(),
                want: points.len(),
            });
        }
        let roles: Vec<bool> = signs.iter().map(|s| s.is_psi()).collect();
        wick_pairing_determinant(&roles, |a, b| {
            let dx = [
                points[a][0] - points[b][0],
                points[a][1] - points[b][1],
                points[a][2] - points[b][2],
                points[a][3] - points[b][3],
            ];
            Ok(backend.dirac(model.mass_dirac, dx)?.0[alphas[a]][alphas[b]])
        })?
    };
    Ok(NPointValue {
        value: det.value * free_factor,
        det_factor: det.value,
        p_n: det.p_n,
        free_factor,
    })
}

/// n-point Wightman function on the tube: (det A)^{-1/2} times the free
/// Dirac Wightman factor (the analytic continuation of the same pairing).
pub fn npoint_wightman(
    points: &[TubePoint],
    signs: &[FieldSign],
    alphas: &[usize],
    model: &ModelParams,
) -> Result<NPointValue> {
    let det = det_inverse_sqrt(&build_a(points, signs, model)?)?;
    let free_factor = if alphas.is_empty() {
        Complex::new(1.0, 0.0)
    } else {
        if alphas.len() != points.len() {
            return Err(Error::SpinorIndexCount {
                got: alphas.len(),
                want: points.len(),
            });
        }
        let roles: Vec<bool> = signs.iter().map(|s| s.is_psi()).collect();
        wick_pairing_determinant(&roles, |a, b| {
            // tau = (eps_a - eps_b) + i (x_a^0 - x_b^0); either boundary
            // value is reached depending on the insertion order.
            let tau = Complex::new(
                points[a].eps - points[b].eps,
                points[a].x[0] - points[b].x[0],
            );
            let dx = [
                points[a].x[1] - points[b].x[1],
                points[a].x[2] - points[b].x[2],
                points[a].x[3] - points[b].x[3],
            ];
            Ok(continuum_dirac_kernel(model.mass_dirac, tau, dx).0[alphas[a]][alphas[b]])
        })?
    };
    Ok(NPointValue {
        value: det.value * free_factor,
        det_factor: det.value,
        p_n: det.p_n,
        free_factor,
    })
}
