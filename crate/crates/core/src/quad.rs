//! Quadrature building blocks: Gauss-Legendre rules, a 15-point
//! Gauss-Kronrod panel, and an adaptive bisection driver for complex-valued
//! integrands on a real interval.
//!
//! The adaptive driver is the production path; the fixed-order composite
//! rule is kept as an independent scheme so the two can be cross-checked.

use num_complex::Complex;

use crate::C64;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK values).
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_97,
    0.417_959_183_673_469_387_755_102_040_816_33,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// One Gauss-Kronrod 15 panel on [a, b]: returns (kronrod value, error estimate).
pub fn gk15<F>(f: &F, a: f64, b: f64) -> (C64, f64)
where
    F: Fn(f64) -> C64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK15[7];
    let mut gauss = fc * WG7[3];
    for j in 0..7 {
        let x = half * XGK15[j];
        let fsum = f(center - x) + f(center + x);
        kronrod += fsum * WGK15[j];
        if j % 2 == 1 {
            gauss += fsum * WG7[j / 2];
        }
    }
    let value = kronrod * half;
    let err = (kronrod - gauss).norm() * half.abs();
    (value, err)
}

/// Adaptive bisection on [a, b] down to an absolute tolerance.
///
/// Deterministic: intervals are processed depth-first, left to right, and the
/// partial results are accumulated in that order. Panics if `max_panels`
/// bisections do not reach the tolerance (all integrands in this crate are
/// analytic, so that indicates a misuse rather than a hard integrand).
pub fn adaptive<F>(f: &F, a: f64, b: f64, tol_abs: f64, max_panels: usize) -> C64
where
    F: Fn(f64) -> C64,
{
    let mut stack = vec![(a, b, tol_abs)];
    let mut acc = Complex::new(0.0, 0.0);
    let mut used = 0usize;
    while let Some((lo, hi, tol)) = stack.pop() {
        used += 1;
        assert!(
            used <= max_panels,
            "adaptive quadrature did not converge on [{a}, {b}] within {max_panels} panels"
        );
        let (v, e) = gk15(f, lo, hi);
        if e <= tol || (hi - lo) < 1e-13 * (b - a).abs() {
            acc += v;
        } else {
            let mid = 0.5 * (lo + hi);
            // Push right first so the left half is processed first.
            stack.push((mid, hi, 0.5 * tol));
            stack.push((lo, mid, 0.5 * tol));
        }
    }
    acc
}

/// Composite fixed-order Gauss-Legendre rule: `panels` equal panels on
/// [a, b], `rule` points each. Independent of the adaptive driver.
pub fn composite_gl<F>(f: &F, a: f64, b: f64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> C64
where
    F: Fn(f64) -> C64,
{
    let (nodes, weights) = rule;
    let h = (b - a) / panels as f64;
    let mut acc = Complex::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let c = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut panel = Complex::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            panel += f(c + half * x) * *w;
        }
        acc += panel * half;
    }
    acc
}

/// Tensor-product Gauss-Legendre quadrature of `f` over the box
/// `[lo_i, hi_i]` in up to a handful of dimensions. Used by the Gaussian
/// integral identity checks; cost grows as `points^dim`.
pub fn tensor_gl<F>(f: &F, lo: &[f64], hi: &[f64], points: usize) -> C64
where
    F: Fn(&[f64]) -> C64 + Sync,
{
    let dim = lo.len();
    assert_eq!(dim, hi.len());
    let (nodes, weights) = gauss_legendre(points);
    let total = points.pow(dim as u32);
    let eval = |flat: usize| {
        let mut idx = flat;
        let mut x = [0.0f64; 8];
        let mut w = 1.0f64;
        for d in 0..dim {
            let i = idx % points;
            idx /= points;
            let half = 0.5 * (hi[d] - lo[d]);
            x[d] = lo[d] + half * (1.0 + nodes[i]);
            w *= weights[i] * half;
        }
        f(&x[..dim]) * w
    };
    crate::reduce::pairwise_sum(total, &eval)
}

/// Chebyshev interpolant of a complex-valued function on [a, b].
///
/// Fitted at the Chebyshev-Gauss points; evaluated by Clenshaw recurrence.
/// Used to turn a few hundred expensive kernel evaluations into a cheap
/// lookup along one axis.
pub struct Cheb {
    a: f64,
    b: f64,
    coef: Vec<C64>,
}

impl Cheb {
    pub fn fit<F>(f: &F, a: f64, b: f64, n: usize) -> Self
    where
        F: Fn(f64) -> C64,
    {
        assert!(n >= 2 && b > a);
        let values: Vec<C64> = (0..n)
            .map(|k| {
                let t = (std::f64::consts::PI * (k as f64 + 0.5) / n as f64).cos();
                f(0.5 * (a + b) + 0.5 * (b - a) * t)
            })
            .collect();
        let mut coef = vec![Complex::new(0.0, 0.0); n];
        for (j, cj) in coef.iter_mut().enumerate() {
            let mut acc = Complex::new(0.0, 0.0);
            for (k, v) in values.iter().enumerate() {
                acc += v * (std::f64::consts::PI * j as f64 * (k as f64 + 0.5) / n as f64).cos();
            }
            *cj = acc * (2.0 / n as f64);
        }
        Cheb { a, b, coef }
    }

    pub fn eval(&self, x: f64) -> C64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let mut d = Complex::new(0.0, 0.0);
        let mut dd = Complex::new(0.0, 0.0);
        for c in self.coef.iter().skip(1).rev() {
            let tmp = d;
            d = d * (2.0 * t) - dd + c;
            dd = tmp;
        }
        d * t - dd + self.coef[0] * 0.5
    }
}
