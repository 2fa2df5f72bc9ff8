//! Minimal double-double arithmetic (unevaluated sums of two f64) for the
//! brute-force reference sums. The closed-form lattice sums are benign in
//! f64, but the term-by-term sums they are checked against lose up to ten
//! digits to cancellation at large |B| Delta; carrying ~31 digits through
//! the terms keeps the reference meaningful at the 1e-11 comparison level.

/// Double-double number hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Copy, Clone)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    /// pi to double-double precision.
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, mut s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        s2 += t1;
        let (s1, mut s2) = quick_two_sum(s1, s2);
        s2 += t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(Dd {
            hi: -o.hi,
            lo: -o.lo,
        })
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, o.hi);
        p2 += self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let d = Dd { hi: s, lo: e }.add(Dd::from_f64(q3));
        d
    }

    pub fn scale(self, x: f64) -> Dd {
        self.mul(Dd::from_f64(x))
    }
}

/// sin and cos of theta = a * pi / b for integers |a| <= 2b, by quadrant
/// reduction and double-double Taylor series on |u| <= pi/4.
pub fn sin_cos_pi_ratio(a: i64, b: i64) -> (Dd, Dd) {
    debug_assert!(b > 0);
    // Reduce a mod 2b into (-b, b] so theta lies in (-pi, pi].
    let period = 2 * b;
    let mut a = a.rem_euclid(period);
    if a > b {
        a -= period;
    }
    // Quadrant m = round(2a/b): theta = m pi/2 + u, |u| <= pi/4.
    let m = (2.0 * a as f64 / b as f64).round() as i64;
    let u = Dd::from_f64(a as f64)
        .sub(Dd::from_f64(m as f64).scale(0.5))
        .mul(Dd::PI)
        .div(Dd::from_f64(b as f64));
    let (su, cu) = sin_cos_taylor(u);
    match m.rem_euclid(4) {
        0 => (su, cu),
        1 => (cu, Dd { hi: -su.hi, lo: -su.lo }),
        2 => (Dd { hi: -su.hi, lo: -su.lo }, Dd { hi: -cu.hi, lo: -cu.lo }),
        _ => (Dd { hi: -cu.hi, lo: -cu.lo }, su),
    }
}

/// Taylor sin/cos for |u| <= pi/4, accurate to ~1e-32.
fn sin_cos_taylor(u: Dd) -> (Dd, Dd) {
    let u2 = u.mul(u);
    // cos: sum (-1)^k u^{2k} / (2k)!; sin: u * sum (-1)^k u^{2k} / (2k+1)!.
    let mut cos = Dd::from_f64(1.0);
    let mut sin_series = Dd::from_f64(1.0);
    let mut term_c = Dd::from_f64(1.0);
    let mut term_s = Dd::from_f64(1.0);
    for k in 1..=16 {
        let k2 = (2 * k) as f64;
        term_c = term_c.mul(u2).div(Dd::from_f64(k2 * (k2 - 1.0)));
        term_s = term_s.mul(u2).div(Dd::from_f64(k2 * (k2 + 1.0)));
        if k % 2 == 1 {
            cos = cos.sub(term_c);
            sin_series = sin_series.sub(term_s);
        } else {
            cos = cos.add(term_c);
            sin_series = sin_series.add(term_s);
        }
    }
    (u.mul(sin_series), cos)
}

/// Complex double-double value.
#[derive(Debug, Copy, Clone)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    pub fn from_c64(z: num_complex::Complex<f64>) -> Self {
        DdComplex {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    pub fn to_c64(self) -> num_complex::Complex<f64> {
        num_complex::Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, o: Self) -> Self {
        DdComplex {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn mul(self, o: Self) -> Self {
        DdComplex {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn div(self, o: Self) -> Self {
        let denom = o.re.mul(o.re).add(o.im.mul(o.im));
        let num = self.mul(DdComplex {
            re: o.re,
            im: Dd { hi: -o.im.hi, lo: -o.im.lo },
        });
        DdComplex {
            re: num.re.div(denom),
            im: num.im.div(denom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_beats_f64_rounding() {
        // (1 + 1e-20) - 1 survives in dd.
        let one = Dd::from_f64(1.0);
        let tiny = Dd::from_f64(1e-20);
        let back = one.add(tiny).sub(one);
        assert_eq!(back.to_f64(), 1e-20);
        // multiplication keeps the cross terms.
        let a = Dd::from_f64(1.0 + 2f64.powi(-30));
        let sq = a.mul(a);
        let expect = 1.0 + 2.0 * 2f64.powi(-30) + 2f64.powi(-60);
        assert!((sq.hi + sq.lo - expect).abs() < 1e-32);
    }

    #[test]
    fn division_roundtrip() {
        let a = Dd::from_f64(std::f64::consts::E);
        let b = Dd::from_f64(1.7320508075688772);
        let q = a.div(b).mul(b).sub(a);
        assert!(q.to_f64().abs() < 1e-30);
    }

    #[test]
    fn trig_matches_f64_at_simple_angles() {
        for (a, b) in [(0i64, 4i64), (1, 4), (2, 4), (3, 4), (4, 4), (-3, 4), (5, 9), (17, 9)] {
            let (s, c) = sin_cos_pi_ratio(a, b);
            let theta = a as f64 * std::f64::consts::PI / b as f64;
            assert!(
                (s.to_f64() - theta.sin()).abs() < 1e-15,
                "sin mismatch at {a} pi/{b}"
            );
            assert!(
                (c.to_f64() - theta.cos()).abs() < 1e-15,
                "cos mismatch at {a} pi/{b}"
            );
            // Pythagorean identity to dd accuracy.
            let one = s.mul(s).add(c.mul(c));
            assert!((one.to_f64() - 1.0).abs() < 1e-30);
        }
    }
}
