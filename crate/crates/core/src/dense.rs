//! Dense linear algebra for the position-space oracles: real symmetric
//! positive-definite Cholesky and complex LU with partial pivoting.
//!
//! Sizes are guarded upstream (a few thousand rows at most), so plain
//! row-oriented loops are adequate.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::C64;

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix
/// given in row-major order. Fails if a pivot drops below `2.2e-14 * scale`.
pub struct Cholesky {
    n: usize,
    /// Row-major lower triangle (upper part unused).
    l: Vec<f64>,
}

impl Cholesky {
    /// Factor `a` (row major, n x n). Only the lower triangle is read.
    pub fn factor(a: &[f64], n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let mut l = a.to_vec();
        let scale = a
            .iter()
            .step_by(n + 1)
            .fold(0.0f64, |acc, &d| acc.max(d.abs()));
        // Row-oriented Crout: entry (i, j) uses dot products of finished
        // row prefixes, which keeps the inner loops contiguous.
        for i in 0..n {
            for j in 0..=i {
                let (ri, rj) = (i * n, j * n);
                let mut s = l[ri + j];
                for k in 0..j {
                    s -= l[ri + k] * l[rj + k];
                }
                if i == j {
                    if s <= 2.2e-14 * scale {
                        return Err(Error::NotPositiveDefinite);
                    }
                    l[ri + j] = s.sqrt();
                } else {
                    l[ri + j] = s / l[rj + j];
                }
            }
        }
        Ok(Cholesky { n, l })
    }

    /// Solve (L L^T) x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.l[i * n + k] * x[k];
            }
            x[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * x[k];
            }
            x[i] = s / self.l[i * n + i];
        }
        x
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// LU factorization with partial pivoting of a complex matrix, row major.
pub struct LuComplex {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    sign_swaps: usize,
}

impl LuComplex {
    pub fn factor(a: &[C64], n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0usize;
        for col in 0..n {
            let mut piv = col;
            let mut best = lu[col * n + col].norm();
            for r in col + 1..n {
                let v = lu[r * n + col].norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return Err(Error::NotPositiveDefinite);
            }
            if piv != col {
                for j in 0..n {
                    lu.swap(col * n + j, piv * n + j);
                }
                perm.swap(col, piv);
                swaps += 1;
            }
            let d = lu[col * n + col];
            for r in col + 1..n {
                let f = lu[r * n + col] / d;
                lu[r * n + col] = f;
                for j in col + 1..n {
                    let v = lu[col * n + j];
                    lu[r * n + j] -= f * v;
                }
            }
        }
        Ok(LuComplex {
            n,
            lu,
            perm,
            sign_swaps: swaps,
        })
    }

    pub fn det(&self) -> C64 {
        let mut d = Complex::new(1.0, 0.0);
        for i in 0..self.n {
            d *= self.lu[i * self.n + i];
        }
        if self.sign_swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.lu[i * n + k] * x[k];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.lu[i * n + k] * x[k];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Full inverse, column by column.
    pub fn inverse(&self) -> Vec<C64> {
        let n = self.n;
        let mut inv = vec![Complex::new(0.0, 0.0); n * n];
        let mut e = vec![Complex::new(0.0, 0.0); n];
        for col in 0..n {
            e[col] = Complex::new(1.0, 0.0);
            let x = self.solve(&e);
            e[col] = Complex::new(0.0, 0.0);
            for (row, v) in x.into_iter().enumerate() {
                inv[row * n + col] = v;
            }
        }
        inv
    }
}

/// Eigenvalues of a small real symmetric matrix by cyclic Jacobi rotations.
pub fn sym_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i * n + i]).collect()
}

/// Determinant of a small real matrix via complex LU (convenience).
pub fn det_real(a: &[f64], n: usize) -> Result<f64> {
    let ac: Vec<C64> = a.iter().map(|&v| Complex::new(v, 0.0)).collect();
    Ok(LuComplex::factor(&ac, n)?.det().re)
}

/// Inverse of a small real matrix, row major.
pub fn inverse_real(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let ac: Vec<C64> = a.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let inv = LuComplex::factor(&ac, n)?.inverse();
    Ok(inv.into_iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_spd_system() {
        // A = B^T B + I is SPD.
        let n = 8;
        let mut b = vec![0.0f64; n * n];
        for (i, v) in b.iter_mut().enumerate() {
            *v = ((i * 7 + 3) % 11) as f64 / 11.0;
        }
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = if i == j { 1.0 } else { 0.0 };
                for k in 0..n {
                    s += b[k * n + i] * b[k * n + j];
                }
                a[i * n + j] = s;
            }
        }
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let ch = Cholesky::factor(&a, n).unwrap();
        let x = ch.solve(&rhs);
        for i in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                s += a[i * n + j] * x[j];
            }
            assert!((s - rhs[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = vec![1.0, 2.0, 2.0, 1.0]; // eigenvalues 3, -1
        assert!(matches!(
            Cholesky::factor(&a, 2),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn complex_lu_det_and_inverse() {
        let i = Complex::i();
        let a = vec![
            Complex::new(2.0, 0.0),
            i,
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
        ];
        let lu = LuComplex::factor(&a, 2).unwrap();
        assert!((lu.det() - Complex::new(2.0, 0.0)).norm() < 1e-14);
        let inv = lu.inverse();
        // a * inv = I
        for r in 0..2 {
            for c in 0..2 {
                let mut s = Complex::new(0.0, 0.0);
                for k in 0..2 {
                    s += a[r * 2 + k] * inv[k * 2 + c];
                }
                let expect = if r == c { 1.0 } else { 0.0 };
                assert!((s - Complex::new(expect, 0.0)).norm() < 1e-14);
            }
        }
    }
}
