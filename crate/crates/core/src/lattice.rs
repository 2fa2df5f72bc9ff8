//! Lattice geometry, dual lattice, discrete Fourier conventions,
//! forward/backward difference symbols, and the Euclidean gamma matrices.
//!
//! The lattice has 2L sites per axis at coordinates j*Delta with
//! j in (-L, L], L = M*N, Delta = sqrt(pi)/M; the dual lattice has points
//! j*eta with eta = sqrt(pi)/N, so Delta * eta = pi / L.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::reduce::pairwise_sum;
use crate::smallmat::{Mat2, SpinorMatrix};
use crate::C64;

/// Lattice and dual-lattice geometry.
#[derive(Debug, Copy, Clone, PartialEq)]
pub struct LatticeParams {
    pub m: u32,
    pub n: u32,
    /// L = M * N; site/momentum indices run over (-L, L].
    pub l: i64,
    /// Site spacing sqrt(pi) / M.
    pub delta: f64,
    /// Dual spacing sqrt(pi) / N.
    pub eta: f64,
}

/// Build the lattice geometry for given M, N.
pub fn make_lattice(m: u32, n: u32) -> Result<LatticeParams> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidLattice { m, n });
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    Ok(LatticeParams {
        m,
        n,
        l: m as i64 * n as i64,
        delta: sqrt_pi / m as f64,
        eta: sqrt_pi / n as f64,
    })
}

impl LatticeParams {
    /// Sites (or dual points) per axis.
    pub fn axis_len(&self) -> usize {
        2 * self.l as usize
    }

    /// Total number of sites of the 4-dimensional lattice.
    pub fn volume(&self) -> usize {
        self.axis_len().pow(4)
    }

    /// Reduce an integer axis coordinate into the canonical window (-L, L].
    pub fn wrap_axis(&self, j: i64) -> i64 {
        let period = 2 * self.l;
        let mut r = j.rem_euclid(period); // 0..2L
        if r > self.l {
            r -= period;
        }
        r
    }

    /// All axis indices in storage order (-L+1 ..= L).
    pub fn axis_indices(&self) -> impl Iterator<Item = i64> {
        (-self.l + 1)..=self.l
    }

    /// Storage offset of an axis index.
    fn axis_offset(&self, j: i64) -> usize {
        (j + self.l - 1) as usize
    }

    /// Flat lexicographic index of a 4-vector of axis indices
    /// (j0 slowest, j3 fastest).
    pub fn flat_index(&self, j: [i64; 4]) -> usize {
        let a = self.axis_len();
        ((self.axis_offset(j[0]) * a + self.axis_offset(j[1])) * a + self.axis_offset(j[2])) * a
            + self.axis_offset(j[3])
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn unflatten(&self, flat: usize) -> [i64; 4] {
        let a = self.axis_len();
        let mut rest = flat;
        let j3 = (rest % a) as i64 - self.l + 1;
        rest /= a;
        let j2 = (rest % a) as i64 - self.l + 1;
        rest /= a;
        let j1 = (rest % a) as i64 - self.l + 1;
        rest /= a;
        let j0 = (rest % a) as i64 - self.l + 1;
        [j0, j1, j2, j3]
    }

    /// Table of the 2L distinct phases exp(i pi t / L), t = 0..2L-1.
    /// Every plane-wave factor on the lattice is one of these, so equal
    /// phases are computed bit-identically.
    pub fn phase_table(&self) -> Vec<C64> {
        let period = 2 * self.l;
        (0..period)
            .map(|t| Complex::from_polar(1.0, std::f64::consts::PI * t as f64 / self.l as f64))
            .collect()
    }
}

/// A site of the 4-dimensional lattice; coordinates are j * Delta.
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub struct LatticeSite {
    pub j: [i64; 4],
}

impl LatticeSite {
    /// Construct, wrapping each component into (-L, L].
    pub fn new(params: &LatticeParams, j: [i64; 4]) -> Self {
        LatticeSite {
            j: [
                params.wrap_axis(j[0]),
                params.wrap_axis(j[1]),
                params.wrap_axis(j[2]),
                params.wrap_axis(j[3]),
            ],
        }
    }

    /// Periodic addition.
    pub fn add(&self, params: &LatticeParams, other: [i64; 4]) -> Self {
        Self::new(
            params,
            [
                self.j[0] + other[0],
                self.j[1] + other[1],
                self.j[2] + other[2],
                self.j[3] + other[3],
            ],
        )
    }

    /// Real-space coordinates j * Delta.
    pub fn coords(&self, params: &LatticeParams) -> [f64; 4] {
        self.j.map(|j| j as f64 * params.delta)
    }
}

/// A point of the dual lattice; momenta are p_mu = k_mu * eta.
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub struct MomentumPoint {
    pub k: [i64; 4],
}

impl MomentumPoint {
    pub fn new(params: &LatticeParams, k: [i64; 4]) -> Self {
        MomentumPoint {
            k: [
                params.wrap_axis(k[0]),
                params.wrap_axis(k[1]),
                params.wrap_axis(k[2]),
                params.wrap_axis(k[3]),
            ],
        }
    }

    pub fn momentum(&self, params: &LatticeParams) -> [f64; 4] {
        self.k.map(|k| k as f64 * params.eta)
    }

    /// p_mu * Delta = k_mu * pi / L, always in (-pi, pi].
    pub fn p_delta(&self, params: &LatticeParams) -> [f64; 4] {
        self.k
            .map(|k| k as f64 * std::f64::consts::PI / params.l as f64)
    }
}

/// Forward/backward difference symbol q_mu = (1 - exp(-i p_mu Delta)) / (i Delta).
///
/// With theta = p_mu Delta this is sin(theta)/Delta - i (1 - cos(theta))/Delta,
/// and |q_mu|^2 = (2 - 2 cos theta) / Delta^2.
pub fn momentum_symbol_q(p: &MomentumPoint, params: &LatticeParams) -> [C64; 4] {
    let pd = p.p_delta(params);
    pd.map(|theta| Complex::new(theta.sin(), theta.cos() - 1.0) / params.delta)
}

/// Complex conjugates q-bar_mu = (exp(i p_mu Delta) - 1) / (i Delta).
pub fn momentum_symbol_q_bar(p: &MomentumPoint, params: &LatticeParams) -> [C64; 4] {
    momentum_symbol_q(p, params).map(|q| q.conj())
}

/// Euclidean gamma matrix, mu in 0..=3:
/// gamma^E_0 = diag(1, 1, -1, -1), gamma^E_j = [[0, -i sigma_j], [i sigma_j, 0]].
pub fn gamma_euclidean(mu: usize) -> Result<SpinorMatrix> {
    let zero = Mat2::zero();
    match mu {
        0 => Ok(SpinorMatrix::from_blocks(
            Mat2::identity(),
            zero,
            zero,
            -Mat2::identity(),
        )),
        1..=3 => {
            let s = Mat2::pauli(mu);
            Ok(SpinorMatrix::from_blocks(
                zero,
                s.scale(Complex::new(0.0, -1.0)),
                s.scale(Complex::i()),
                zero,
            ))
        }
        _ => Err(Error::GammaIndex(mu)),
    }
}

/// Projector P_+ = (1 + gamma^E_0)/2 = diag(1, 1, 0, 0).
pub fn projector_plus() -> SpinorMatrix {
    let mut m = SpinorMatrix::zero();
    m.0[0][0] = Complex::new(1.0, 0.0);
    m.0[1][1] = Complex::new(1.0, 0.0);
    m
}

/// Projector P_- = (1 - gamma^E_0)/2 = diag(0, 0, 1, 1).
pub fn projector_minus() -> SpinorMatrix {
    let mut m = SpinorMatrix::zero();
    m.0[2][2] = Complex::new(1.0, 0.0);
    m.0[3][3] = Complex::new(1.0, 0.0);
    m
}

/// Forward lattice Fourier transform
/// F(p) = (2 pi)^{-2} sum_x exp(-i p x) f(x) Delta^4.
pub fn lattice_fourier(field: &[C64], params: &LatticeParams) -> Result<Vec<C64>> {
    transform(field, params, -1, params.delta.powi(4))
}

/// Inverse transform f(x) = (2 pi)^{-2} sum_p exp(i p x) F(p) eta^4.
pub fn lattice_fourier_inverse(field: &[C64], params: &LatticeParams) -> Result<Vec<C64>> {
    transform(field, params, 1, params.eta.powi(4))
}

/// Separable axis-by-axis DFT. `sign` is the phase sign, `measure` the
/// Delta^4 or eta^4 weight; each direction carries one (2 pi)^{-1/2}-free
/// convention factor so the pair composes to the identity.
fn transform(field: &[C64], params: &LatticeParams, sign: i64, measure: f64) -> Result<Vec<C64>> {
    let vol = params.volume();
    if field.len() != vol {
        return Err(Error::ShapeMismatch {
            got: field.len(),
            want: vol,
        });
    }
    let a = params.axis_len();
    let l = params.l;
    let period = 2 * l;
    let phases = params.phase_table();
    let norm = measure / (2.0 * std::f64::consts::PI).powi(2);

    let mut data = field.to_vec();
    // One axis at a time; the transformed axis index runs over k, the
    // untouched block structure is captured by (outer, inner) strides.
    for axis in 0..4 {
        let stride = a.pow(3 - axis as u32);
        let outer = a.pow(axis as u32);
        let mut next = vec![Complex::new(0.0, 0.0); vol];
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * stride * a + inner;
                for (ki, k) in params.axis_indices().enumerate() {
                    let mut acc = Complex::new(0.0, 0.0);
                    for (ji, j) in params.axis_indices().enumerate() {
                        let t = (sign * k * j).rem_euclid(period) as usize;
                        acc += phases[t] * data[base + ji * stride];
                    }
                    next[base + ki * stride] = acc;
                }
            }
        }
        data = next;
    }
    for v in data.iter_mut() {
        *v *= norm;
    }
    Ok(data)
}

/// Plane-wave phase exp(i p x) for a site/momentum pair, via the shared
/// phase table: the exponent is Sum_mu k_mu j_mu mod 2L.
pub fn plane_wave(phases: &[C64], l: i64, k: &[i64; 4], j: &[i64; 4]) -> C64 {
    let dot: i64 = (0..4).map(|m| k[m] * j[m]).sum();
    phases[dot.rem_euclid(2 * l) as usize]
}

/// Sum `f(p)` over the full dual lattice with the deterministic reduction.
pub fn momentum_sum<T, F>(params: &LatticeParams, f: F) -> T
where
    T: crate::reduce::Zeroed,
    F: Fn(MomentumPoint) -> T + Sync,
{
    let closure = |flat: usize| f(MomentumPoint { k: params.unflatten(flat) });
    pairwise_sum(params.volume(), &closure)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        Complex::new(re, im)
    }

    #[test]
    fn make_lattice_geometry() {
        let p = make_lattice(2, 3).unwrap();
        assert_eq!(p.l, 6);
        assert!((p.delta - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((p.eta - std::f64::consts::PI.sqrt() / 3.0).abs() < 1e-15);
        // Delta * eta = pi / L exactly up to rounding.
        assert!((p.delta * p.eta - std::f64::consts::PI / 6.0).abs() < 1e-15);

        let tiny = make_lattice(1, 1).unwrap();
        assert_eq!(tiny.axis_len(), 2);
        assert!((tiny.delta - tiny.eta).abs() == 0.0);
    }

    #[test]
    fn make_lattice_rejects_zero() {
        assert!(make_lattice(0, 3).is_err());
        assert!(make_lattice(3, 0).is_err());
    }

    #[test]
    fn wrap_addition_is_periodic() {
        let p = make_lattice(1, 2).unwrap(); // L = 2, indices -1..=2
        let s = LatticeSite::new(&p, [2, 2, 2, 2]);
        let t = s.add(&p, [1, 2, 3, 4]);
        assert_eq!(t.j, [-1, 0, 1, 2]);
    }

    #[test]
    fn q_symbol_values() {
        let p = make_lattice(2, 2).unwrap();
        // p = 0 gives q = 0.
        let q0 = momentum_symbol_q(&MomentumPoint::new(&p, [0, 0, 0, 0]), &p);
        for q in q0 {
            assert_eq!(q, c(0.0, 0.0));
        }
        // |q|^2 = (2 - 2 cos p Delta)/Delta^2 for every dual point.
        for k in p.axis_indices() {
            let mp = MomentumPoint::new(&p, [k, 0, 0, 0]);
            let q = momentum_symbol_q(&mp, &p)[0];
            let theta = mp.p_delta(&p)[0];
            let expect = (2.0 - 2.0 * theta.cos()) / (p.delta * p.delta);
            assert!((q.norm_sqr() - expect).abs() < 1e-13);
            // q-bar is the complex conjugate.
            assert_eq!(momentum_symbol_q_bar(&mp, &p)[0], q.conj());
        }
        // At the zone edge p Delta = pi: |q|^2 = 4 / Delta^2.
        let edge = MomentumPoint::new(&p, [p.l, 0, 0, 0]);
        let q = momentum_symbol_q(&edge, &p)[0];
        assert!((q.norm_sqr() - 4.0 / (p.delta * p.delta)).abs() < 1e-13);
    }

    #[test]
    fn gamma_clifford_algebra() {
        let two_id = SpinorMatrix::identity().scale(c(2.0, 0.0));
        for mu in 0..4 {
            for nu in 0..4 {
                let gm = gamma_euclidean(mu).unwrap();
                let gn = gamma_euclidean(nu).unwrap();
                let anti = gm * gn + gn * gm;
                let expect = if mu == nu {
                    two_id
                } else {
                    SpinorMatrix::zero()
                };
                assert!(
                    anti.max_diff(&expect) == 0.0,
                    "Clifford identity fails at mu={mu}, nu={nu}"
                );
            }
        }
        assert!(gamma_euclidean(4).is_err());
    }

    #[test]
    fn gamma0_is_diag_1_1_m1_m1() {
        let g0 = gamma_euclidean(0).unwrap();
        let mut expect = SpinorMatrix::zero();
        for (i, v) in [1.0, 1.0, -1.0, -1.0].into_iter().enumerate() {
            expect.0[i][i] = c(v, 0.0);
        }
        assert_eq!(g0, expect);
    }

    #[test]
    fn projectors() {
        let sum = projector_plus() + projector_minus();
        assert!(sum.max_diff(&SpinorMatrix::identity()) == 0.0);
        let prod = projector_plus() * projector_minus();
        assert!(prod.max_diff(&SpinorMatrix::zero()) == 0.0);
        // P_+- = (1 +- gamma0)/2
        let g0 = gamma_euclidean(0).unwrap();
        let built = (SpinorMatrix::identity() + g0).scale(c(0.5, 0.0));
        assert!(built.max_diff(&projector_plus()) == 0.0);
    }

    #[test]
    fn fourier_delta_function_is_flat() {
        // delta(y) = Delta^{-4} delta_{0,y} transforms to the constant (2 pi)^{-2}.
        let p = make_lattice(1, 1).unwrap();
        let mut field = vec![c(0.0, 0.0); p.volume()];
        field[p.flat_index([0, 0, 0, 0])] = c(p.delta.powi(-4), 0.0);
        let ft = lattice_fourier(&field, &p).unwrap();
        let expect = (2.0 * std::f64::consts::PI).powi(-2);
        for v in ft {
            assert!((v - c(expect, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn fourier_plane_wave_is_point_mass() {
        // exp(i p0 x) concentrates on the dual point p0; oracle: the direct
        // two-sided summation on a 2^4 lattice.
        let p = make_lattice(1, 1).unwrap();
        let k0 = [1i64, 0, 0, 0];
        let phases = p.phase_table();
        let field: Vec<C64> = (0..p.volume())
            .map(|flat| plane_wave(&phases, p.l, &k0, &p.unflatten(flat)))
            .collect();
        let ft = lattice_fourier(&field, &p).unwrap();
        // Direct summation oracle for each dual point.
        for flat in 0..p.volume() {
            let k = p.unflatten(flat);
            let mut acc = c(0.0, 0.0);
            for site in 0..p.volume() {
                let j = p.unflatten(site);
                let arg: i64 = (0..4).map(|m| (k0[m] - k[m]) * j[m]).sum();
                acc += phases[arg.rem_euclid(2 * p.l) as usize];
            }
            let direct = acc * p.delta.powi(4) / (2.0 * std::f64::consts::PI).powi(2);
            assert!((ft[flat] - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn fourier_roundtrip_is_identity() {
        for (m, n) in [(1, 1), (2, 1), (2, 2)] {
            let p = make_lattice(m, n).unwrap();
            // Deterministic pseudo-random field.
            let field: Vec<C64> = (0..p.volume())
                .map(|i| c((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
                .collect();
            let ft = lattice_fourier(&field, &p).unwrap();
            let back = lattice_fourier_inverse(&ft, &p).unwrap();
            let mut worst = 0.0f64;
            for (a, b) in field.iter().zip(back.iter()) {
                worst = worst.max((a - b).norm());
            }
            assert!(worst < 1e-12, "roundtrip error {worst} on M={m}, N={n}");
        }
    }

    #[test]
    fn fourier_shape_mismatch() {
        let p = make_lattice(1, 1).unwrap();
        let short = vec![c(0.0, 0.0); 3];
        assert!(matches!(
            lattice_fourier(&short, &p),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn cosine_bound_on_symbol() {
        // (2/pi)^2 p^2 <= (2 - 2 cos p Delta)/Delta^2 <= p^2 on the zone.
        let p = make_lattice(3, 2).unwrap();
        for k in p.axis_indices() {
            let mp = MomentumPoint::new(&p, [k, 0, 0, 0]);
            let q2 = momentum_symbol_q(&mp, &p)[0].norm_sqr();
            let pm = mp.momentum(&p)[0];
            let lower = (2.0 / std::f64::consts::PI).powi(2) * pm * pm;
            let upper = pm * pm;
            assert!(q2 >= lower - 1e-12 && q2 <= upper + 1e-12);
        }
    }
}
