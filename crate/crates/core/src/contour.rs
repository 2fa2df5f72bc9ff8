//! Evaluate two-point functionals as pairings of an analytic kernel with an
//! analytic test function along a shifted contour x -> (x^0 - i eps, x_vec),
//! and probe contour-shift invariance and the analyticity threshold.

use std::collections::HashMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::interacting::fundamental_length;
use crate::quad::{gauss_legendre, Cheb};
use crate::reduce::pairwise_sum;
use crate::scalar::radial;
use crate::C64;

/// Entire test function on the tube: a translated Gaussian times a
/// polynomial,  f(z) = P(z) exp(-sum (z_mu - c_mu)^2 / sigma^2),
/// which decays on every horizontal strip. The declared strip height is
/// 10 sigma.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub centers: [f64; 4],
    pub sigma: f64,
    /// Monomial terms (coefficient, powers per axis).
    pub poly: Vec<(C64, [u8; 4])>,
}

impl TestFunction {
    /// Plain Gaussian centered at `centers`.
    pub fn gaussian(centers: [f64; 4], sigma: f64) -> Self {
        assert!(sigma > 0.0);
        TestFunction {
            centers,
            sigma,
            poly: vec![(Complex::new(1.0, 0.0), [0, 0, 0, 0])],
        }
    }

    /// Gaussian times a polynomial.
    pub fn with_poly(centers: [f64; 4], sigma: f64, poly: Vec<(C64, [u8; 4])>) -> Self {
        assert!(sigma > 0.0 && !poly.is_empty());
        TestFunction {
            centers,
            sigma,
            poly,
        }
    }

    /// Declared strip half-height K_max.
    pub fn k_max(&self) -> f64 {
        10.0 * self.sigma
    }

    pub fn eval(&self, z: [C64; 4]) -> C64 {
        let mut expo = Complex::new(0.0, 0.0);
        for mu in 0..4 {
            let d = z[mu] - self.centers[mu];
            expo -= d * d / (self.sigma * self.sigma);
        }
        let gauss = expo.exp();
        let mut p = Complex::new(0.0, 0.0);
        for (coef, powers) in &self.poly {
            let mut term = *coef;
            for mu in 0..4 {
                for _ in 0..powers[mu] {
                    term *= z[mu];
                }
            }
            p += term;
        }
        p * gauss
    }

    /// The conjugate-reflected partner f*(z) = conj(f(-conj z)): the merged
    /// single-variable form of reversing the two insertion slots and
    /// conjugating. Structurally: centers flip sign, coefficients conjugate
    /// with a parity sign.
    pub fn conjugate_reflection(&self) -> TestFunction {
        let poly = self
            .poly
            .iter()
            .map(|(coef, powers)| {
                let total: u32 = powers.iter().map(|&p| p as u32).sum();
                let sign = if total % 2 == 0 { 1.0 } else { -1.0 };
                (coef.conj() * sign, *powers)
            })
            .collect();
        TestFunction {
            centers: self.centers.map(|c| -c),
            sigma: self.sigma,
            poly,
        }
    }

    /// Numerical decay certificate: the largest |z^p f(z)| over all
    /// multi-indices |p| <= max_total, sampled on the strip boundary
    /// Im z^0 = +-K and Im z_vec = 0. Finite by construction; callers can
    /// assert it before trusting a contour height.
    pub fn decay_certificate(&self, max_total: u32, strip_height: f64) -> f64 {
        let mut sup = 0.0f64;
        let half_width = 12.0 * self.sigma;
        let samples = 96;
        for axis in 0..4 {
            for s in 0..=samples {
                let t = -half_width + 2.0 * half_width * s as f64 / samples as f64;
                for height_sign in [-1.0, 1.0] {
                    let mut z = [Complex::new(0.0, 0.0); 4];
                    for mu in 0..4 {
                        z[mu] = Complex::new(self.centers[mu], 0.0);
                    }
                    z[axis] = Complex::new(self.centers[axis] + t, height_sign * strip_height);
                    let fz = self.eval(z).norm();
                    let zmax = z.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
                    sup = sup.max(fz * zmax.powi(max_total as i32));
                }
            }
        }
        sup
    }
}

/// Kernel of the pairing.
#[derive(Debug, Copy, Clone)]
pub enum Kernel {
    /// (1 - 4 l^4 D^(-)(z)^2)^{-1/2} D^(-)(z): the interacting scalar-pair
    /// two-point kernel; l = 0 degenerates to the free D^(-).
    ScalarPair { coupling_l: f64, mass: f64 },
    /// Component (alpha, beta) of the free Dirac Wightman two-point matrix.
    FreeDiracComponent {
        mass: f64,
        alpha: usize,
        beta: usize,
    },
}

impl Kernel {
    /// Minimal admissible contour height (exclusive).
    fn height_floor(&self) -> f64 {
        match self {
            Kernel::ScalarPair { coupling_l, .. } => fundamental_length(*coupling_l),
            Kernel::FreeDiracComponent { .. } => 0.0,
        }
    }

    /// The kernel whose pairing with f* conjugates the pairing with f:
    /// scalar kernels are self-paired, Dirac components swap indices.
    pub fn hermitian_partner(&self) -> Kernel {
        match *self {
            Kernel::ScalarPair { .. } => *self,
            Kernel::FreeDiracComponent { mass, alpha, beta } => Kernel::FreeDiracComponent {
                mass,
                alpha: beta,
                beta: alpha,
            },
        }
    }
}

/// Contour height and quadrature resolution.
#[derive(Debug, Copy, Clone)]
pub struct ContourSpec {
    /// Imaginary height of the difference-variable contour.
    pub epsilon: f64,
    /// Gauss-Legendre nodes per axis.
    pub nodes_per_axis: usize,
    /// Truncation half-width in units of the test function's sigma.
    pub half_width_sigmas: f64,
}

impl ContourSpec {
    pub fn new(epsilon: f64) -> Self {
        ContourSpec {
            epsilon,
            nodes_per_axis: 64,
            half_width_sigmas: 8.0,
        }
    }
}

/// Dedup of the radial coordinate over the spatial tensor grid: triples that
/// are permutations (up to sign) of the same axis values share one radius,
/// computed once in a canonical order.
struct RadialGrid {
    /// Unique radii.
    values: Vec<f64>,
    /// Flat (a, b, c) -> index into `values`.
    index: Vec<u32>,
}

fn radial_grid(xs: [&[f64]; 3]) -> RadialGrid {
    let n = xs[0].len();
    let mut map: HashMap<[u64; 3], u32> = HashMap::new();
    let mut values = Vec::new();
    let mut index = vec![0u32; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut key = [xs[0][a].abs(), xs[1][b].abs(), xs[2][c].abs()];
                key.sort_by(|p, q| p.partial_cmp(q).unwrap());
                let bits = key.map(f64::to_bits);
                let slot = *map.entry(bits).or_insert_with(|| {
                    let r = (key[0] * key[0] + key[1] * key[1] + key[2] * key[2]).sqrt();
                    values.push(r);
                    (values.len() - 1) as u32
                });
                index[(a * n + b) * n + c] = slot;
            }
        }
    }
    RadialGrid { values, index }
}

/// Chebyshev resolution for a kernel slice at contour height eps over
/// r in [0, rmax]: the analyticity margin of the kernel in r is ~eps.
fn cheb_points(rmax: f64, eps: f64) -> usize {
    (64.0 + 14.0 * rmax / eps.min(1.0)).min(900.0) as usize
}

/// Per-time-node kernel tables over the unique radii.
enum KernelTable {
    /// F value per (time node, radius).
    Scalar(Vec<Vec<C64>>),
    /// (k0, k1r, k2) radial pieces per (time node, radius); assembled into
    /// the requested matrix component with the direction unit vector.
    Dirac {
        k0: Vec<Vec<C64>>,
        k1r: Vec<Vec<C64>>,
        k2: Vec<Vec<C64>>,
        alpha: usize,
        beta: usize,
        mass: f64,
    },
}

fn build_tables(
    kernel: &Kernel,
    eps: f64,
    time_nodes: &[f64],
    radii: &[f64],
    rmax: f64,
) -> KernelTable {
    use rayon::prelude::*;
    let n_cheb = cheb_points(rmax, eps);
    match *kernel {
        Kernel::ScalarPair { coupling_l, mass } => {
            let l4 = coupling_l.powi(4);
            let rows: Vec<Vec<C64>> = time_nodes
                .par_iter()
                .map(|&x0| {
                    let tau = Complex::new(eps, x0);
                    let fit = Cheb::fit(&|r| radial::k_omega(mass, tau, r), 0.0, rmax, n_cheb);
                    radii
                        .iter()
                        .map(|&r| {
                            let d = fit.eval(r);
                            let det = Complex::new(1.0, 0.0) - d * d * 4.0 * l4;
                            det.sqrt().finv() * d
                        })
                        .collect()
                })
                .collect();
            KernelTable::Scalar(rows)
        }
        Kernel::FreeDiracComponent { mass, alpha, beta } => {
            let fit_rows = |f: &(dyn Fn(C64, f64) -> C64 + Sync)| -> Vec<Vec<C64>> {
                time_nodes
                    .par_iter()
                    .map(|&x0| {
                        let tau = Complex::new(eps, x0);
                        let fit = Cheb::fit(&|r| f(tau, r), 0.0, rmax, n_cheb);
                        radii.iter().map(|&r| fit.eval(r)).collect()
                    })
                    .collect()
            };
            KernelTable::Dirac {
                k0: fit_rows(&|tau, r| radial::k_omega(mass, tau, r)),
                k1r: fit_rows(&|tau, r| radial::k_omega_dr(mass, tau, r)),
                k2: fit_rows(&|tau, r| radial::k_plain(mass, tau, r)),
                alpha,
                beta,
                mass,
            }
        }
    }
}

impl KernelTable {
    /// Kernel value at (time node i, radius slot, spatial direction).
    fn value(&self, i: usize, slot: usize, xhat: [f64; 3], r: f64) -> C64 {
        match self {
            KernelTable::Scalar(rows) => rows[i][slot],
            KernelTable::Dirac {
                k0,
                k1r,
                k2,
                alpha,
                beta,
                mass,
            } => {
                let m_term = if alpha == beta { k0[i][slot] * *mass } else { Complex::new(0.0, 0.0) };
                // gamma^E_0 direction term: +k2 on components 0, 1 and -k2 on 2, 3.
                let sign_term = if alpha == beta {
                    if *alpha < 2 {
                        k2[i][slot]
                    } else {
                        -k2[i][slot]
                    }
                } else {
                    Complex::new(0.0, 0.0)
                };
                // Off-diagonal 2x2 blocks: +- i k1r (sigma . xhat).
                let off = if r > 0.0 && (*alpha < 2) != (*beta < 2) {
                    let sx = crate::smallmat::Mat2::sigma_dot([
                        Complex::new(xhat[0], 0.0),
                        Complex::new(xhat[1], 0.0),
                        Complex::new(xhat[2], 0.0),
                    ]);
                    let (row, col) = (*alpha % 2, *beta % 2);
                    let sign = if *alpha < 2 { crate::IM } else { -crate::IM };
                    sx.0[row][col] * sign * k1r[i][slot]
                } else {
                    Complex::new(0.0, 0.0)
                };
                m_term + sign_term + off
            }
        }
    }
}

/// Pair the kernel with a test function along the contour (x^0 - i eps, x):
/// a full 4-dimensional tensor-product Gauss-Legendre quadrature.
pub fn eval_two_point_functional(
    kernel: &Kernel,
    f: &TestFunction,
    spec: &ContourSpec,
) -> Result<C64> {
    let eps = spec.epsilon;
    if eps <= 0.0 {
        return Err(Error::NonpositiveEps(eps));
    }
    if eps > f.k_max() {
        return Err(Error::OutsideTestFunctionStrip {
            eps,
            k_max: f.k_max(),
        });
    }
    let floor = kernel.height_floor();
    if eps <= floor {
        return Err(Error::BelowFundamentalLength { eps, ell: floor });
    }

    let n = spec.nodes_per_axis;
    let (gl_nodes, gl_weights) = gauss_legendre(n);
    let half = spec.half_width_sigmas * f.sigma;
    let mut nodes: Vec<Vec<f64>> = Vec::with_capacity(4);
    let mut weights: Vec<Vec<f64>> = Vec::with_capacity(4);
    for mu in 0..4 {
        let c = f.centers[mu];
        let axis_nodes: Vec<f64> = gl_nodes.iter().map(|t| c + half * t).collect();
        let axis_weights: Vec<f64> = gl_weights.iter().map(|w| w * half).collect();
        nodes.push(axis_nodes);
        weights.push(axis_weights);
    }

    let grid = radial_grid([&nodes[1], &nodes[2], &nodes[3]]);
    let rmax = grid.values.iter().cloned().fold(0.0f64, f64::max);
    let table = build_tables(kernel, eps, &nodes[0], &grid.values, rmax.max(1e-6));

    let n3 = n * n * n;
    let total = n * n3;
    let term = |flat: usize| -> C64 {
        let i0 = flat / n3;
        let rest = flat % n3;
        let a = rest / (n * n);
        let b = (rest / n) % n;
        let cdx = rest % n;
        let slot = grid.index[rest] as usize;
        let r = grid.values[slot];
        let (x1, x2, x3) = (nodes[1][a], nodes[2][b], nodes[3][cdx]);
        let xhat = if r > 0.0 {
            [x1 / r, x2 / r, x3 / r]
        } else {
            [0.0; 3]
        };
        let kval = table.value(i0, slot, xhat, r);
        let z = [
            Complex::new(nodes[0][i0], -eps),
            Complex::new(x1, 0.0),
            Complex::new(x2, 0.0),
            Complex::new(x3, 0.0),
        ];
        let w = weights[0][i0] * weights[1][a] * weights[2][b] * weights[3][cdx];
        kval * f.eval(z) * w
    };
    Ok(pairwise_sum::<C64, _>(total, &term))
}

/// One row of a contour-invariance table.
#[derive(Debug, Copy, Clone)]
pub struct InvarianceRow {
    pub epsilon: f64,
    pub value: C64,
    pub deviation_from_mean: f64,
}

/// Invariance report across contour heights.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub rows: Vec<InvarianceRow>,
    /// Headline number: max |v_i - v_j| / mean |v|.
    pub max_pairwise_rel: f64,
}

/// Evaluate the functional at several contour heights; by analyticity the
/// values agree within quadrature tolerance (Cauchy's theorem is the claim
/// under test).
pub fn contour_invariance_report(
    kernel: &Kernel,
    f: &TestFunction,
    eps_list: &[f64],
    nodes_per_axis: usize,
) -> Result<InvarianceReport> {
    if eps_list.is_empty() {
        return Err(Error::EmptyInput("eps_list"));
    }
    let mut values = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let spec = ContourSpec {
            epsilon: eps,
            nodes_per_axis,
            ..ContourSpec::new(eps)
        };
        values.push(eval_two_point_functional(kernel, f, &spec)?);
    }
    let mean = values.iter().sum::<C64>() / values.len() as f64;
    let scale = mean.norm().max(1e-300);
    let rows: Vec<InvarianceRow> = eps_list
        .iter()
        .zip(values.iter())
        .map(|(&epsilon, &value)| InvarianceRow {
            epsilon,
            value,
            deviation_from_mean: (value - mean).norm() / scale,
        })
        .collect();
    let mut max_pairwise = 0.0f64;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            max_pairwise = max_pairwise.max((values[i] - values[j]).norm() / scale);
        }
    }
    Ok(InvarianceReport {
        rows,
        max_pairwise_rel: max_pairwise,
    })
}

/// Hermiticity check: conj of the pairing with f equals the pairing of the
/// partner kernel with f*(z) = conj(f(-conj z)).
#[derive(Debug, Copy, Clone)]
pub struct HermiticityReport {
    pub pairing: C64,
    pub partner_pairing_with_f_star: C64,
    pub deviation: f64,
}

pub fn hermiticity_check(
    kernel: &Kernel,
    f: &TestFunction,
    spec: &ContourSpec,
) -> Result<HermiticityReport> {
    let pairing = eval_two_point_functional(kernel, f, spec)?;
    let partner = kernel.hermitian_partner();
    let f_star = f.conjugate_reflection();
    let partner_pairing = eval_two_point_functional(&partner, &f_star, spec)?;
    Ok(HermiticityReport {
        pairing,
        partner_pairing_with_f_star: partner_pairing,
        deviation: (pairing.conj() - partner_pairing).norm(),
    })
}

/// One threshold-probe row: the grid maximum of |4 l^4 D^(-)^2| at a
/// contour height.
#[derive(Debug, Copy, Clone)]
pub struct ThresholdSample {
    pub eps_fraction: f64,
    pub epsilon: f64,
    pub grid_max: f64,
}

/// Scan |4 l^4 D^(-)(x^0 - i eps, x)^2| over a fixed (x^0, |x|) grid that
/// includes x = 0, for eps at the given multiples of the fundamental length.
pub fn threshold_probe(l: f64, mass: f64, eps_fractions: &[f64]) -> Result<Vec<ThresholdSample>> {
    let ell = fundamental_length(l);
    let x0s = [0.0, 0.25, 0.5, 1.0, 2.0];
    let rs = [0.0, 0.25, 0.5, 1.0, 2.0];
    eps_fractions
        .iter()
        .map(|&frac| {
            if frac <= 0.0 {
                return Err(Error::NonpositiveEps(frac));
            }
            let eps = frac * ell;
            let mut grid_max = 0.0f64;
            for &x0 in &x0s {
                for &sign in &[-1.0, 1.0] {
                    for &r in &rs {
                        let d = crate::scalar::wightman_minus(mass, sign * x0, eps, [r, 0.0, 0.0])?;
                        grid_max = grid_max.max((d * d).norm() * 4.0 * l.powi(4));
                    }
                }
            }
            Ok(ThresholdSample {
                eps_fraction: frac,
                epsilon: eps,
                grid_max,
            })
        })
        .collect()
}
