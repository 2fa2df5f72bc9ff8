//! Free neutral scalar field: lattice two-point functions by direct
//! dual-lattice summation, the closed-form acceleration of the time-axis
//! sum, a dense position-space inverse as an independent oracle, and the
//! continuum Schwinger/Wightman functions by radial quadrature.

use num_complex::Complex;

use crate::dense::Cholesky;
use crate::error::{Error, Result};
use crate::lattice::{momentum_symbol_q, LatticeParams, LatticeSite, MomentumPoint};
use crate::reduce::pairwise_sum;
use crate::C64;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Momentum-space symbol of -laplace + m^2:
/// sum_mu (2 - 2 cos p_mu Delta)/Delta^2 + m^2. Always >= m^2.
pub fn scalar_symbol(p: &MomentumPoint, m: f64, params: &LatticeParams) -> f64 {
    let q = momentum_symbol_q(p, params);
    q.iter().map(|qm| qm.norm_sqr()).sum::<f64>() + m * m
}

/// Roots z+- of z^2 - (2 + Delta^2 B^2) z + 1: the poles of the
/// one-dimensional lattice sum in the variable z = exp(i p Delta).
#[derive(Debug, Copy, Clone)]
pub struct RootPair {
    pub z_plus: C64,
    pub z_minus: C64,
    /// z+ - z- = Delta B sqrt(4 + Delta^2 B^2).
    pub gap: C64,
}

impl RootPair {
    /// For B != 0 with |arg B| <= pi/4 the principal square root keeps
    /// Re z+ > 1, and z- = 1/z+ lies strictly inside the unit circle.
    pub fn new(b: C64, delta: f64) -> Result<Self> {
        if b.norm() == 0.0 {
            return Err(Error::ZeroB);
        }
        let arg_b = b.arg().abs();
        if arg_b > std::f64::consts::FRAC_PI_4 + 1e-12 {
            return Err(Error::ArgBOutOfRange { arg_b });
        }
        let w = b * delta;
        let s = (Complex::new(4.0, 0.0) + w * w).sqrt();
        let gap = w * s;
        let z_plus = (Complex::new(2.0, 0.0) + w * w + gap) * 0.5;
        debug_assert!(z_plus.norm() > 1.0);
        Ok(RootPair {
            z_plus,
            z_minus: z_plus.finv(),
            gap,
        })
    }
}

fn cpow(z: C64, mut n: u64) -> C64 {
    let mut base = z;
    let mut acc = Complex::new(1.0, 0.0);
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

/// Closed form of the one-dimensional dual-lattice sum
/// sum_{p in dual} exp(i x p) / ((2 - 2 cos p Delta)/Delta^2 + B^2) * eta
/// for x = k Delta. Requires B != 0 and |arg B| <= pi/4.
///
/// The geometric series over the poles z+- is summed exactly for the finite
/// lattice: on top of the leading 2 pi Delta z+^{-|k|} / (z+ - z-) this keeps
/// the wrap-around tail (z+^{-|k|} + z+^{|k| - 2L}) / (1 - z+^{-2L}), which
/// is what makes the value equal the direct sum to near machine precision at
/// small L. The expression is 2L-periodic in k, so any integer k is accepted.
pub fn one_d_sum_closed(b: C64, k: i64, params: &LatticeParams) -> Result<C64> {
    let roots = RootPair::new(b, params.delta)?;
    let two_l = 2 * params.l as u64;
    let a = params.wrap_axis(k).unsigned_abs(); // |k| <= L after wrapping
    let zm = roots.z_minus; // = z+^{-1}, |zm| < 1
    let lead = cpow(zm, a) + cpow(zm, two_l - a);
    let tail = Complex::new(1.0, 0.0) - cpow(zm, two_l);
    Ok(Complex::new(TWO_PI * params.delta, 0.0) / roots.gap * lead / tail)
}

/// Brute-force evaluation of the same sum, term by term over the 2L dual
/// points. Reference implementation for [`one_d_sum_closed`].
pub fn one_d_sum_direct(b: C64, k: i64, params: &LatticeParams) -> C64 {
    let phases = params.phase_table();
    let b2 = b * b;
    let d2 = params.delta * params.delta;
    let n = params.axis_len();
    let term = |i: usize| {
        let j = i as i64 - params.l + 1;
        let theta = j as f64 * std::f64::consts::PI / params.l as f64;
        let denom = Complex::new((2.0 - 2.0 * theta.cos()) / d2, 0.0) + b2;
        phases[(k * j).rem_euclid(2 * params.l) as usize] / denom
    };
    pairwise_sum::<C64, _>(n, &term) * params.eta
}

/// The same brute-force sum carried in double-double arithmetic. The value
/// decays like z+^{-|k|}, so at large |B| Delta the f64 term-by-term sum
/// loses up to ten digits to cancellation; this reference keeps enough
/// digits that a 1e-11 relative comparison against the closed form remains
/// meaningful everywhere in the admissible B range.
pub fn one_d_sum_direct_dd(b: C64, k: i64, params: &LatticeParams) -> C64 {
    use crate::dd::{sin_cos_pi_ratio, Dd, DdComplex};
    let b2 = DdComplex::from_c64(b).mul(DdComplex::from_c64(b));
    let delta2 = Dd::from_f64(params.delta).mul(Dd::from_f64(params.delta));
    let two = Dd::from_f64(2.0);
    let mut acc = DdComplex::ZERO;
    for j in params.axis_indices() {
        let (_, cos_theta) = sin_cos_pi_ratio(j, params.l);
        let sym = two.sub(two.mul(cos_theta)).div(delta2);
        let denom = DdComplex {
            re: sym.add(b2.re),
            im: b2.im,
        };
        let (sin_p, cos_p) = sin_cos_pi_ratio(k * j, params.l);
        let phase = DdComplex { re: cos_p, im: sin_p };
        acc = acc.add(phase.div(denom));
    }
    let eta = Dd::from_f64(params.eta);
    DdComplex {
        re: acc.re.mul(eta),
        im: acc.im.mul(eta),
    }
    .to_c64()
}

/// Number of summand evaluations of the direct 4-dimensional propagator sum.
pub fn direct_term_count(params: &LatticeParams) -> usize {
    params.volume()
}

/// Number of summand evaluations after the time-axis sum is replaced by the
/// closed form: one per spatial dual point.
pub fn accel_term_count(params: &LatticeParams) -> usize {
    params.axis_len().pow(3)
}

/// Lattice two-point function by the full 4-dimensional dual sum:
/// (2 pi)^{-4} sum_p exp(i p x) / symbol(p) * eta^4.
pub fn lattice_propagator_direct(params: &LatticeParams, m: f64, x: &LatticeSite) -> C64 {
    let phases = params.phase_table();
    let measure = params.eta.powi(4) / TWO_PI.powi(4);
    let term = |flat: usize| {
        let k = params.unflatten(flat);
        let p = MomentumPoint { k };
        let phase = crate::lattice::plane_wave(&phases, params.l, &k, &x.j);
        phase / scalar_symbol(&p, m, params)
    };
    pairwise_sum::<C64, _>(params.volume(), &term) * measure
}

/// Lattice two-point function with the time-axis sum replaced by the closed
/// form at B = A(p_vec), A^2 = m^2 + spatial symbol. (2L)^3 summands.
pub fn lattice_propagator_accel(params: &LatticeParams, m: f64, x: &LatticeSite) -> C64 {
    let phases = params.phase_table();
    let a = params.axis_len();
    let l = params.l;
    let d2 = params.delta * params.delta;
    let measure = params.eta.powi(3) / TWO_PI.powi(4);
    let term = |flat: usize| {
        let mut rest = flat;
        let j3 = (rest % a) as i64 - l + 1;
        rest /= a;
        let j2 = (rest % a) as i64 - l + 1;
        rest /= a;
        let j1 = (rest % a) as i64 - l + 1;
        let spatial: f64 = [j1, j2, j3]
            .iter()
            .map(|&j| {
                let theta = j as f64 * std::f64::consts::PI / l as f64;
                (2.0 - 2.0 * theta.cos()) / d2
            })
            .sum();
        let big_a = (m * m + spatial).sqrt();
        let time_sum = one_d_sum_closed(Complex::new(big_a, 0.0), x.j[0], params)
            .expect("A(p) >= m > 0 is always admissible");
        let dot = j1 * x.j[1] + j2 * x.j[2] + j3 * x.j[3];
        phases[dot.rem_euclid(2 * l) as usize] * time_sum
    };
    pairwise_sum::<C64, _>(a.pow(3), &term) * measure
}

/// Value of the lattice two-point function at the origin, S_m(0; N, M).
pub fn s_zero(params: &LatticeParams, m: f64) -> f64 {
    lattice_propagator_direct(params, m, &LatticeSite { j: [0, 0, 0, 0] }).re
}

/// S_m(0) for a list of M (with N = M). Strictly increasing along
/// increasing M is the divergence trend of the continuum limit.
pub fn s_zero_trend(m: f64, m_list: &[u32]) -> Result<Vec<(u32, f64)>> {
    m_list
        .iter()
        .map(|&mm| {
            let params = crate::lattice::make_lattice(mm, mm)?;
            Ok((mm, s_zero(&params, m)))
        })
        .collect()
}

/// Comparison sums that sandwich S_m(0) through the cosine estimate
/// (2/pi^2) t^2 <= 1 - cos t <= t^2/2 on |t| <= pi: the lattice symbol obeys
/// 4|p|^2/pi^2 + m^2 <= symbol(p) <= |p|^2 + m^2, so
///
///   sum [|p|^2 + m^2]^{-1}  <=  S_m(0)  <=  sum [4|p|^2/pi^2 + m^2]^{-1},
///
/// and the lower sum is the one that diverges with the cutoff, which is the
/// divergence statement the trend test tracks.
fn s_zero_comparison(params: &LatticeParams, m: f64, coefficient: f64) -> f64 {
    let measure = params.eta.powi(4) / TWO_PI.powi(4);
    let term = |flat: usize| {
        let k = params.unflatten(flat);
        let p2: f64 = k
            .iter()
            .map(|&ki| {
                let pm = ki as f64 * params.eta;
                pm * pm
            })
            .sum();
        1.0 / (coefficient * p2 + m * m)
    };
    pairwise_sum::<f64, _>(params.volume(), &term) * measure
}

/// Divergent lower bound: (2 pi)^{-4} sum_p [|p|^2 + m^2]^{-1} eta^4.
pub fn s_zero_lower_bound(params: &LatticeParams, m: f64) -> f64 {
    s_zero_comparison(params, m, 1.0)
}

/// Upper bound: (2 pi)^{-4} sum_p [4 |p|^2 / pi^2 + m^2]^{-1} eta^4.
pub fn s_zero_upper_bound(params: &LatticeParams, m: f64) -> f64 {
    s_zero_comparison(params, m, 4.0 / (std::f64::consts::PI * std::f64::consts::PI))
}

/// Dense position-space route: assemble -laplace + m^2 as a real matrix over
/// all (2L)^4 sites, Cholesky-factor it, and read covariance entries from
/// solves. Independent of the momentum-space representation.
pub struct DenseScalarOracle {
    params: LatticeParams,
    chol: Cholesky,
    operator: Vec<f64>,
    /// Covariance column against the origin: entry(x) = S_m(x - 0).
    column0: Vec<f64>,
}

/// Site-count guard for the dense solve.
pub const DENSE_SITE_LIMIT: usize = 4096;

impl DenseScalarOracle {
    pub fn build(params: &LatticeParams, m: f64) -> Result<Self> {
        let n = params.volume();
        if n > DENSE_SITE_LIMIT {
            return Err(Error::SizeGuard {
                size: n,
                limit: DENSE_SITE_LIMIT,
            });
        }
        let operator = assemble_scalar_operator(params, m);
        let chol = Cholesky::factor(&operator, n)?;
        let mut e0 = vec![0.0; n];
        e0[params.flat_index([0, 0, 0, 0])] = 1.0;
        let mut column0 = chol.solve(&e0);
        let scale = params.delta.powi(-4);
        for v in column0.iter_mut() {
            *v *= scale;
        }
        Ok(DenseScalarOracle {
            params: *params,
            chol,
            operator,
            column0,
        })
    }

    /// S_m(x - 0) from the dense inverse.
    pub fn entry_vs_origin(&self, x: &LatticeSite) -> f64 {
        self.column0[self.params.flat_index(x.j)]
    }

    /// S_m(x - y) by an explicit solve against the y column (no translation
    /// invariance assumed).
    pub fn entry(&self, x: &LatticeSite, y: &LatticeSite) -> f64 {
        let n = self.params.volume();
        let mut ey = vec![0.0; n];
        ey[self.params.flat_index(y.j)] = 1.0;
        let col = self.chol.solve(&ey);
        col[self.params.flat_index(x.j)] * self.params.delta.powi(-4)
    }

    /// The assembled position-space operator matrix (row major).
    pub fn operator_matrix(&self) -> &[f64] {
        &self.operator
    }
}

fn assemble_scalar_operator(params: &LatticeParams, m: f64) -> Vec<f64> {
    let n = params.volume();
    let inv_d2 = 1.0 / (params.delta * params.delta);
    let mut q = vec![0.0f64; n * n];
    for row in 0..n {
        let site = LatticeSite {
            j: params.unflatten(row),
        };
        q[row * n + row] += 8.0 * inv_d2 + m * m;
        for axis in 0..4 {
            for step in [1i64, -1] {
                let mut shift = [0i64; 4];
                shift[axis] = step;
                let nb = site.add(params, shift);
                q[row * n + params.flat_index(nb.j)] -= inv_d2;
            }
        }
    }
    q
}

/// One evaluation record of a lattice-vs-continuum comparison.
#[derive(Debug, Clone, Copy)]
pub struct PropagatorSample {
    pub x: [f64; 4],
    pub lattice_value: C64,
    pub continuum_value: C64,
    pub abs_error: f64,
    pub rel_error: f64,
}

impl PropagatorSample {
    pub fn new(x: [f64; 4], lattice_value: C64, continuum_value: C64) -> Self {
        let abs_error = (lattice_value - continuum_value).norm();
        PropagatorSample {
            x,
            lattice_value,
            continuum_value,
            abs_error,
            rel_error: abs_error / continuum_value.norm().max(1e-300),
        }
    }
}

/// Radial quadrature engines shared by the scalar and Dirac continuum
/// two-point functions and by the contour module.
pub mod radial {
    use super::*;
    use crate::quad::{adaptive, composite_gl, gauss_legendre};

    /// Integration cutoff: beyond p_max the damping exp(-omega Re tau)
    /// is below 1e-17 relative to the peak.
    fn p_cutoff(tau: C64) -> f64 {
        40.0 / tau.re + 2.0
    }

    fn tol_for(tau: C64) -> f64 {
        // The kernels are bounded by (2 pi Re tau)^{-2}; aim well below
        // the 1e-8 cross-check tolerances at every scale.
        1e-13 * (1.0 + 1.0 / (tau.re * tau.re))
    }

    /// cos(u) - sin(u)/u without cancellation near u = 0.
    fn cos_minus_sinc(u: f64) -> f64 {
        if u.abs() < 1e-3 {
            let u2 = u * u;
            -u2 / 3.0 + u2 * u2 / 30.0 - u2 * u2 * u2 / 840.0
        } else {
            u.cos() - u.sin() / u
        }
    }

    /// (2 pi)^{-3} int d^3p exp(i p.x) exp(-omega tau) / (2 omega),
    /// omega = sqrt(p^2 + m^2), Re tau > 0, r = |x|.
    ///
    /// This single kernel covers the continuum Schwinger function
    /// (tau = |x0|) and the Wightman boundary value (tau = eps + i x0).
    pub fn k_omega(m: f64, tau: C64, r: f64) -> C64 {
        assert!(tau.re > 0.0, "radial kernel needs Re tau > 0");
        let pmax = p_cutoff(tau);
        let norm = 1.0 / (4.0 * std::f64::consts::PI.powi(2));
        if r < 1e-10 {
            let f = |p: f64| {
                let omega = (p * p + m * m).sqrt();
                (-tau * omega).exp() * (p * p / omega)
            };
            adaptive(&f, 0.0, pmax, tol_for(tau), 400_000) * norm
        } else {
            let f = |p: f64| {
                let omega = (p * p + m * m).sqrt();
                (-tau * omega).exp() * (p * (p * r).sin() / omega)
            };
            adaptive(&f, 0.0, pmax, tol_for(tau), 400_000) * (norm / r)
        }
    }

    /// d/dr of [`k_omega`]. Vanishes at r = 0.
    pub fn k_omega_dr(m: f64, tau: C64, r: f64) -> C64 {
        assert!(tau.re > 0.0);
        if r < 1e-10 {
            return Complex::new(0.0, 0.0);
        }
        let pmax = p_cutoff(tau);
        let norm = 1.0 / (4.0 * std::f64::consts::PI.powi(2) * r);
        let f = |p: f64| {
            let omega = (p * p + m * m).sqrt();
            (-tau * omega).exp() * (p * p / omega) * cos_minus_sinc(p * r)
        };
        adaptive(&f, 0.0, pmax, tol_for(tau) * r.min(1.0), 400_000) * norm
    }

    /// (2 pi)^{-3} int d^3p exp(i p.x) exp(-omega tau) / 2: the companion
    /// kernel of the time-sign term of the Dirac two-point function.
    pub fn k_plain(m: f64, tau: C64, r: f64) -> C64 {
        assert!(tau.re > 0.0);
        let pmax = p_cutoff(tau);
        let norm = 1.0 / (4.0 * std::f64::consts::PI.powi(2));
        if r < 1e-10 {
            let f = |p: f64| {
                let omega = (p * p + m * m).sqrt();
                (-tau * omega).exp() * (p * p)
            };
            adaptive(&f, 0.0, pmax, tol_for(tau) / tau.re.min(1.0), 400_000) * norm
        } else {
            let f = |p: f64| {
                let omega = (p * p + m * m).sqrt();
                (-tau * omega).exp() * (p * (p * r).sin())
            };
            adaptive(&f, 0.0, pmax, tol_for(tau) / tau.re.min(1.0), 400_000) * (norm / r)
        }
    }

    /// Independent fixed-order evaluation of [`k_omega`]: composite
    /// Gauss-Legendre with panels sized from the oscillation rate.
    pub fn k_omega_fixed(m: f64, tau: C64, r: f64) -> C64 {
        assert!(tau.re > 0.0);
        let pmax = p_cutoff(tau);
        let rate = r + tau.im.abs();
        let panels = ((pmax * rate / TWO_PI).ceil() as usize + 24).max(24);
        let rule = gauss_legendre(32);
        let norm = 1.0 / (4.0 * std::f64::consts::PI.powi(2));
        if r < 1e-10 {
            let f = |p: f64| {
                let omega = (p * p + m * m).sqrt();
                (-tau * omega).exp() * (p * p / omega)
            };
            composite_gl(&f, 0.0, pmax, panels, &rule) * norm
        } else {
            let f = |p: f64| {
                let omega = (p * p + m * m).sqrt();
                (-tau * omega).exp() * (p * (p * r).sin() / omega)
            };
            composite_gl(&f, 0.0, pmax, panels, &rule) * (norm / r)
        }
    }
}

/// Continuum two-point Schwinger function of the free scalar field at a real
/// separation with x0 != 0, by the reduced radial integral
/// (2 pi)^{-3} int d^3p exp(i p.x) exp(-omega |x0|) / (2 omega).
pub fn continuum_schwinger(m: f64, x: [f64; 4]) -> Result<f64> {
    if m <= 0.0 {
        return Err(Error::NonpositiveMass(m));
    }
    if x[0] == 0.0 {
        return Err(Error::ZeroTimeSeparation);
    }
    let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
    let v = radial::k_omega(m, Complex::new(x[0].abs(), 0.0), r);
    debug_assert!(v.im.abs() < 1e-12 * v.re.abs().max(1.0));
    Ok(v.re)
}

/// Same value through the independent fixed-order scheme.
pub fn continuum_schwinger_fixed_order(m: f64, x: [f64; 4]) -> Result<f64> {
    if m <= 0.0 {
        return Err(Error::NonpositiveMass(m));
    }
    if x[0] == 0.0 {
        return Err(Error::ZeroTimeSeparation);
    }
    let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
    Ok(radial::k_omega_fixed(m, Complex::new(x[0].abs(), 0.0), r).re)
}

/// Wightman boundary value D_m^(-)(x0 - i eps, x_vec) for eps > 0:
/// the same radial integral with complex damping exp(-omega (eps + i x0)).
pub fn wightman_minus(m: f64, x0: f64, eps: f64, xvec: [f64; 3]) -> Result<C64> {
    if m <= 0.0 {
        return Err(Error::NonpositiveMass(m));
    }
    if eps <= 0.0 {
        return Err(Error::NonpositiveEps(eps));
    }
    let r = (xvec[0] * xvec[0] + xvec[1] * xvec[1] + xvec[2] * xvec[2]).sqrt();
    Ok(radial::k_omega(m, Complex::new(eps, x0), r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::rel_error;
    use crate::lattice::make_lattice;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> C64 {
        Complex::new(re, im)
    }

    #[test]
    fn root_pair_invariants() {
        let params = make_lattice(2, 3).unwrap();
        let bs = [
            c(1.0, 0.0),
            c(0.3, 0.3),
            c(5.0, -4.9),
            c(0.1, 0.0),
            c(2.0, -2.0),
        ];
        for b in bs {
            let roots = RootPair::new(b, params.delta).unwrap();
            assert!((roots.z_plus * roots.z_minus - c(1.0, 0.0)).norm() < 1e-14);
            let sum = roots.z_plus + roots.z_minus;
            let expect = c(2.0, 0.0) + b * b * params.delta * params.delta;
            assert!((sum - expect).norm() < 1e-12 * expect.norm());
            assert!(roots.z_plus.re > 1.0);
            assert!(roots.z_minus.norm() < 1.0);
        }
    }

    #[test]
    fn one_d_closed_rejects_bad_b() {
        let params = make_lattice(1, 1).unwrap();
        assert!(matches!(
            one_d_sum_closed(c(0.0, 0.0), 0, &params),
            Err(Error::ZeroB)
        ));
        assert!(matches!(
            one_d_sum_closed(c(0.1, 0.2), 0, &params),
            Err(Error::ArgBOutOfRange { .. })
        ));
    }

    #[test]
    fn one_d_closed_matches_direct_m1_n1() {
        // Frozen from the brute-force dual sum (B = 1, x = 0, M = N = 1):
        // eta (1/B^2 + Delta^2/(4 + Delta^2 B^2)) = sqrt(pi) (1 + pi/(4+pi)).
        let params = make_lattice(1, 1).unwrap();
        let expect = std::f64::consts::PI.sqrt()
            * (1.0 + std::f64::consts::PI / (4.0 + std::f64::consts::PI));
        let direct = one_d_sum_direct(c(1.0, 0.0), 0, &params);
        assert!((direct.re - expect).abs() < 1e-12);
        let closed = one_d_sum_closed(c(1.0, 0.0), 0, &params).unwrap();
        assert!(rel_error(closed, direct) < 1e-13);
    }

    #[test]
    fn one_d_closed_matches_direct_everywhere() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (m, n) in [(1u32, 1u32), (1, 2), (2, 1), (2, 3), (3, 3)] {
            let params = make_lattice(m, n).unwrap();
            for _ in 0..20 {
                let mag = 10f64.powf(rng.gen_range(-1.0..1.0));
                let arg = rng.gen_range(-std::f64::consts::FRAC_PI_4..std::f64::consts::FRAC_PI_4);
                let b = Complex::from_polar(mag, arg);
                for k in params.axis_indices() {
                    let closed = one_d_sum_closed(b, k, &params).unwrap();
                    let dd = one_d_sum_direct_dd(b, k, &params);
                    assert!(
                        rel_error(closed, dd) < 1e-11,
                        "closed/reference mismatch at M={m} N={n} B={b} k={k}"
                    );
                    // The plain f64 sum agrees up to its own cancellation
                    // floor: absolute error at the scale of the terms.
                    let f64_direct = one_d_sum_direct(b, k, &params);
                    let term_scale = params.eta / b.norm_sqr().max(1e-2);
                    assert!(
                        (closed - f64_direct).norm()
                            < 1e-11 * f64_direct.norm() + 1e-13 * term_scale,
                        "f64 direct sum off beyond its conditioning at B={b} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn one_d_closed_depends_on_abs_x_and_is_periodic() {
        let params = make_lattice(2, 2).unwrap();
        let b = c(1.3, 0.0);
        for k in 0..=params.l {
            let plus = one_d_sum_closed(b, k, &params).unwrap();
            let minus = one_d_sum_closed(b, -k, &params).unwrap();
            assert_eq!(plus, minus);
            let wrapped = one_d_sum_closed(b, k + 2 * params.l, &params).unwrap();
            assert_eq!(plus, wrapped);
        }
    }

    #[test]
    fn accel_equals_direct_small_lattices() {
        for (m, n) in [(1u32, 1u32), (2, 2)] {
            let params = make_lattice(m, n).unwrap();
            for x in [[0i64, 0, 0, 0], [1, 0, 0, 0], [1, 1, 0, 1]] {
                let site = LatticeSite::new(&params, x);
                let direct = lattice_propagator_direct(&params, 1.0, &site);
                let accel = lattice_propagator_accel(&params, 1.0, &site);
                assert!(
                    rel_error(accel, direct) < 1e-12,
                    "accel/direct mismatch at M=N={m}, x={x:?}"
                );
            }
        }
    }

    #[test]
    fn term_count_ratio_is_one_over_axis() {
        let params = make_lattice(2, 2).unwrap();
        assert_eq!(
            accel_term_count(&params) * params.axis_len(),
            direct_term_count(&params)
        );
    }

    #[test]
    fn propagator_is_even_and_real() {
        let params = make_lattice(2, 1).unwrap();
        for x in [[1i64, 0, 0, 0], [1, 2, 0, 1], [0, 1, 1, 0]] {
            let plus = lattice_propagator_direct(&params, 1.0, &LatticeSite::new(&params, x));
            let minus = lattice_propagator_direct(
                &params,
                1.0,
                &LatticeSite::new(&params, [-x[0], -x[1], -x[2], -x[3]]),
            );
            assert!((plus - minus).norm() < 1e-12 * plus.norm());
            assert!(plus.im.abs() < 1e-10 * plus.re.abs());
        }
    }

    #[test]
    fn dense_oracle_matches_momentum_sum() {
        let params = make_lattice(1, 1).unwrap();
        let oracle = DenseScalarOracle::build(&params, 1.0).unwrap();
        for flat in 0..params.volume() {
            let x = LatticeSite {
                j: params.unflatten(flat),
            };
            let dense = oracle.entry_vs_origin(&x);
            let momentum = lattice_propagator_direct(&params, 1.0, &x);
            assert!(
                rel_error(c(dense, 0.0), momentum) < 1e-10,
                "dense vs momentum at {:?}",
                x.j
            );
        }
    }

    #[test]
    fn dense_oracle_translation_invariance_spot_check() {
        let params = make_lattice(1, 1).unwrap();
        let oracle = DenseScalarOracle::build(&params, 1.0).unwrap();
        let x = LatticeSite::new(&params, [1, 0, 1, 0]);
        let y = LatticeSite::new(&params, [0, 1, 0, 0]);
        let diff = LatticeSite::new(&params, [x.j[0] - y.j[0], x.j[1] - y.j[1], x.j[2] - y.j[2], x.j[3] - y.j[3]]);
        let via_column = oracle.entry_vs_origin(&diff);
        let direct = oracle.entry(&x, &y);
        assert!((via_column - direct).abs() < 1e-10 * via_column.abs().max(1.0));
    }

    #[test]
    fn dense_oracle_size_guard() {
        let params = make_lattice(3, 3).unwrap();
        assert!(matches!(
            DenseScalarOracle::build(&params, 1.0),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn dense_operator_eigenvalues_at_least_m_squared() {
        // Q - (m^2 - tol) I stays positive definite.
        let params = make_lattice(1, 1).unwrap();
        let m = 1.3;
        let oracle = DenseScalarOracle::build(&params, m).unwrap();
        let n = params.volume();
        let mut shifted = oracle.operator_matrix().to_vec();
        for i in 0..n {
            shifted[i * n + i] -= m * m - 1e-9;
        }
        assert!(Cholesky::factor(&shifted, n).is_ok());
    }

    #[test]
    fn dense_oracle_heavy_mass_limit() {
        // m -> infinity: diagonal entry -> m^{-2} Delta^{-4}.
        let params = make_lattice(1, 1).unwrap();
        let m = 1e6;
        let oracle = DenseScalarOracle::build(&params, m).unwrap();
        let diag = oracle.entry_vs_origin(&LatticeSite { j: [0, 0, 0, 0] });
        let expect = params.delta.powi(-4) / (m * m);
        assert!((diag - expect).abs() < 1e-9 * expect);
        let off = oracle.entry_vs_origin(&LatticeSite::new(&params, [1, 0, 0, 0]));
        assert!(off.abs() < 1e-9 * expect);
    }

    #[test]
    fn s_zero_monotone_in_m_and_sandwiched() {
        let params = make_lattice(2, 2).unwrap();
        let s1 = s_zero(&params, 1.0);
        let s2 = s_zero(&params, 2.0);
        assert!(s2 < s1, "S_m(0) must decrease as m grows");
        assert!(s1 >= s_zero_lower_bound(&params, 1.0));
        assert!(s1 <= s_zero_upper_bound(&params, 1.0));
    }

    #[test]
    fn s_zero_trend_increases() {
        let trend = s_zero_trend(1.0, &[1, 2]).unwrap();
        assert!(trend[1].1 > trend[0].1);
    }

    #[test]
    fn continuum_schwinger_guards() {
        assert!(matches!(
            continuum_schwinger(1.0, [0.0, 1.0, 0.0, 0.0]),
            Err(Error::ZeroTimeSeparation)
        ));
        assert!(matches!(
            continuum_schwinger(0.0, [1.0, 0.0, 0.0, 0.0]),
            Err(Error::NonpositiveMass(_))
        ));
    }

    #[test]
    fn continuum_schwinger_rotation_invariance() {
        let a = continuum_schwinger(1.0, [0.8, 0.6, 0.0, 0.0]).unwrap();
        let b = continuum_schwinger(1.0, [0.8, 0.0, 0.6, 0.0]).unwrap();
        let d = continuum_schwinger(1.0, [-0.8, 0.0, 0.0, 0.6]).unwrap();
        assert!((a - b).abs() < 1e-11 * a.abs());
        assert!((a - d).abs() < 1e-11 * a.abs());
    }

    #[test]
    fn continuum_schwinger_two_scheme_cross_check() {
        for x in [
            [1.0, 0.0, 0.0, 0.0],
            [0.5, 0.7, 0.0, 0.0],
            [2.0, 0.3, 0.4, 0.5],
            [0.886, 0.0, 0.0, 0.0],
        ] {
            let a = continuum_schwinger(1.0, x).unwrap();
            let b = continuum_schwinger_fixed_order(1.0, x).unwrap();
            assert!(
                (a - b).abs() < 1e-8 * a.abs().max(1e-8),
                "schemes disagree at {x:?}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn wightman_at_zero_time_is_schwinger() {
        // D^(-)(-i eps, x) = S_m(eps, x).
        let eps = 0.7;
        let xv = [0.4, 0.2, 0.1];
        let w = wightman_minus(1.0, 0.0, eps, xv).unwrap();
        let s = continuum_schwinger(1.0, [eps, xv[0], xv[1], xv[2]]).unwrap();
        assert!((w.re - s).abs() < 1e-10 * s.abs());
        assert!(w.im.abs() < 1e-10 * s.abs());
    }

    #[test]
    fn wightman_conjugation_symmetry() {
        let (x0, eps, xv) = (0.9, 0.5, [0.3, -0.2, 0.4]);
        let w = wightman_minus(1.0, x0, eps, xv).unwrap();
        let reflected = wightman_minus(1.0, -x0, eps, [-xv[0], -xv[1], -xv[2]]).unwrap();
        assert!((w.conj() - reflected).norm() < 1e-10 * w.norm());
    }

    #[test]
    fn wightman_global_bound() {
        // |D^(-)| <= (2 pi eps)^{-2} on a grid of (x0, |x|, eps).
        for &x0 in &[0.0, 0.5, 1.0, 2.0, 4.0] {
            for &r in &[0.0, 0.5, 1.0, 2.0, 4.0] {
                for &eps in &[0.2, 0.5, 1.0, 2.0, 3.0] {
                    let w = wightman_minus(1.0, x0, eps, [r, 0.0, 0.0]).unwrap();
                    let bound = (TWO_PI * eps).powi(-2);
                    assert!(
                        w.norm() <= bound * (1.0 + 1e-12),
                        "bound violated at x0={x0}, r={r}, eps={eps}: {} > {bound}",
                        w.norm()
                    );
                }
            }
        }
    }

    #[test]
    fn wightman_rejects_nonpositive_eps() {
        assert!(matches!(
            wightman_minus(1.0, 1.0, 0.0, [0.0; 3]),
            Err(Error::NonpositiveEps(_))
        ));
    }

    #[test]
    fn time_axis_tail_bound() {
        // Partial sum over |p_vec| >= M0 = sqrt(sqrt(pi) M) decays like the
        // closed-form estimate 2^{-2 M0 |x0|/pi} (pi / 4 M0) per spatial
        // momentum, for |x0| >= Delta.
        let params = make_lattice(4, 4).unwrap();
        let m = 1.0;
        // Region cutoff sqrt(sqrt(pi) M); the bound itself uses M0 = sqrt(M),
        // which every momentum in the region dominates.
        let m0_region = (std::f64::consts::PI.sqrt() * params.m as f64).sqrt();
        let m0 = (params.m as f64).sqrt();
        for k0 in [1i64, 2, 4] {
            let x = LatticeSite::new(&params, [k0, 0, 0, 0]);
            let phases = params.phase_table();
            let a = params.axis_len();
            let l = params.l;
            let d2 = params.delta * params.delta;
            // Sum over the outer spatial region, time axis first.
            let term = |flat: usize| {
                let mut rest = flat;
                let j3 = (rest % a) as i64 - l + 1;
                rest /= a;
                let j2 = (rest % a) as i64 - l + 1;
                rest /= a;
                let j1 = (rest % a) as i64 - l + 1;
                let p2: f64 = [j1, j2, j3]
                    .iter()
                    .map(|&j| (j as f64 * params.eta).powi(2))
                    .sum();
                if p2.sqrt() < m0_region {
                    return [c(0.0, 0.0), c(0.0, 0.0)];
                }
                let spatial: f64 = [j1, j2, j3]
                    .iter()
                    .map(|&j| {
                        let theta = j as f64 * std::f64::consts::PI / l as f64;
                        (2.0 - 2.0 * theta.cos()) / d2
                    })
                    .sum();
                let big_a = (m * m + spatial).sqrt();
                let t = one_d_sum_closed(c(big_a, 0.0), x.j[0], &params).unwrap();
                [t, c(1.0, 0.0)]
            };
            let crate::reduce::ArraySum([sum, count]) =
                pairwise_sum::<crate::reduce::ArraySum<C64, 2>, _>(a.pow(3), &|i| {
                    crate::reduce::ArraySum(term(i))
                });
            let partial = (sum * params.eta.powi(3) / TWO_PI.powi(4)).norm();
            let x0 = (k0 as f64) * params.delta;
            let per_term = 2f64.powf(-2.0 * m0 * x0 / std::f64::consts::PI)
                * (std::f64::consts::PI / (4.0 * m0));
            let bound = per_term * count.re * params.eta.powi(3) / TWO_PI.powi(3);
            assert!(
                partial <= bound,
                "tail bound fails at k0={k0}: partial={partial:.3e} bound={bound:.3e}"
            );
        }
    }

    #[test]
    fn one_d_dd_reference_agrees_with_f64_at_benign_b() {
        let params = make_lattice(2, 3).unwrap();
        let b = c(1.0, 0.3);
        for k in params.axis_indices() {
            let f = one_d_sum_direct(b, k, &params);
            let dd = one_d_sum_direct_dd(b, k, &params);
            assert!((f - dd).norm() < 1e-13 * f.norm());
        }
    }

    #[test]
    fn one_d_closed_matches_dd_reference_at_harsh_b() {
        // Large |B| Delta makes the plain f64 term sum cancellation-bound;
        // the dd reference stays comparable at 1e-11 relative.
        let params = make_lattice(3, 3).unwrap();
        for b in [c(10.0, 0.0), c(7.0, -6.9), c(5.2, 1.7)] {
            for k in params.axis_indices() {
                let closed = one_d_sum_closed(b, k, &params).unwrap();
                let dd = one_d_sum_direct_dd(b, k, &params);
                assert!(
                    rel_error(closed, dd) < 1e-11,
                    "closed vs dd reference at B={b} k={k}: {:e}",
                    rel_error(closed, dd)
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn prop_closed_equals_direct(mag in 0.1f64..10.0,
                                     arg in -0.78f64..0.78,
                                     k in -6i64..=6) {
            let params = make_lattice(2, 3).unwrap();
            let b = Complex::from_polar(mag, arg);
            let closed = one_d_sum_closed(b, k, &params).unwrap();
            let reference = one_d_sum_direct_dd(b, k, &params);
            prop_assert!(rel_error(closed, reference) < 1e-11);
        }

        #[test]
        fn prop_symbol_at_least_m_squared(k0 in -4i64..=4, k1 in -4i64..=4,
                                          k2 in -4i64..=4, k3 in -4i64..=4,
                                          m in 0.1f64..5.0) {
            let params = make_lattice(2, 2).unwrap();
            let p = MomentumPoint::new(&params, [k0, k1, k2, k3]);
            prop_assert!(scalar_symbol(&p, m, &params) >= m * m);
        }
    }

    // Keep a seeded rng import alive for the oracle-style loops above.
    #[allow(dead_code)]
    fn _rng_anchor() {
        let _ = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    }
}
