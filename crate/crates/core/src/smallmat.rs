//! Small fixed-size complex matrices: 2x2 blocks and 4x4 spinor matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::C64;

/// 2x2 complex matrix, row major.
#[derive(Debug, Copy, Clone, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

/// 4x4 complex matrix, row major. Holds gamma matrices, the momentum-space
/// Dirac symbol, and propagator values.
#[derive(Debug, Copy, Clone, PartialEq)]
pub struct SpinorMatrix(pub [[C64; 4]; 4]);

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

impl Mat2 {
    pub const fn zero() -> Self {
        Mat2([[Complex::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.0[0][0] = c(1.0, 0.0);
        m.0[1][1] = c(1.0, 0.0);
        m
    }

    /// Pauli matrix sigma_j, j in 1..=3 (sigma_0 is the identity).
    pub fn pauli(j: usize) -> Self {
        match j {
            0 => Self::identity(),
            1 => Mat2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
            2 => Mat2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
            3 => Mat2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]),
            _ => panic!("pauli index {j} out of range"),
        }
    }

    /// sigma . v for a complex 3-vector v.
    pub fn sigma_dot(v: [C64; 3]) -> Self {
        Mat2([
            [v[2], v[0] - crate::IM * v[1]],
            [v[0] + crate::IM * v[1], -v[2]],
        ])
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj_entries(&self) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for e in row.iter_mut() {
                *e = e.conj();
            }
        }
        m
    }

    pub fn max_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut m = self;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut m = self;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] -= rhs.0[i][j];
            }
        }
        m
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut m = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    m.0[i][j] += self.0[i][k] * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(c(-1.0, 0.0))
    }
}

impl SpinorMatrix {
    pub const fn zero() -> Self {
        SpinorMatrix([[Complex::new(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = c(1.0, 0.0);
        }
        m
    }

    /// Assemble from 2x2 blocks [[a, b], [c, d]].
    pub fn from_blocks(a: Mat2, b: Mat2, cc: Mat2, d: Mat2) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = a.0[i][j];
                m.0[i][j + 2] = b.0[i][j];
                m.0[i + 2][j] = cc.0[i][j];
                m.0[i + 2][j + 2] = d.0[i][j];
            }
        }
        m
    }

    pub fn block(&self, bi: usize, bj: usize) -> Mat2 {
        let mut b = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                b.0[i][j] = self.0[2 * bi + i][2 * bj + j];
            }
        }
        b
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    /// max-norm of the difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    pub fn mul_vec(&self, v: [C64; 4]) -> [C64; 4] {
        let mut out = [c(0.0, 0.0); 4];
        for i in 0..4 {
            for k in 0..4 {
                out[i] += self.0[i][k] * v[k];
            }
        }
        out
    }

    /// Generic 4x4 inverse by Gaussian elimination with partial pivoting.
    /// Panics on a singular matrix; callers guard the mass so that the
    /// symbols this is applied to are always invertible.
    pub fn inverse(&self) -> Self {
        let mut a = self.0;
        let mut inv = Self::identity().0;
        for col in 0..4 {
            let mut piv = col;
            for r in col + 1..4 {
                if a[r][col].norm() > a[piv][col].norm() {
                    piv = r;
                }
            }
            assert!(a[piv][col].norm() > 0.0, "singular 4x4 matrix");
            a.swap(col, piv);
            inv.swap(col, piv);
            let d = a[col][col];
            for j in 0..4 {
                a[col][j] /= d;
                inv[col][j] /= d;
            }
            for r in 0..4 {
                if r != col {
                    let factor = a[r][col];
                    for j in 0..4 {
                        let acj = a[col][j];
                        let icj = inv[col][j];
                        a[r][j] -= factor * acj;
                        inv[r][j] -= factor * icj;
                    }
                }
            }
        }
        SpinorMatrix(inv)
    }
}

impl Add for SpinorMatrix {
    type Output = SpinorMatrix;
    fn add(self, rhs: SpinorMatrix) -> SpinorMatrix {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl Sub for SpinorMatrix {
    type Output = SpinorMatrix;
    fn sub(self, rhs: SpinorMatrix) -> SpinorMatrix {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] -= rhs.0[i][j];
            }
        }
        m
    }
}

impl Mul for SpinorMatrix {
    type Output = SpinorMatrix;
    fn mul(self, rhs: SpinorMatrix) -> SpinorMatrix {
        let mut m = SpinorMatrix::zero();
        for i in 0..4 {
            for k in 0..4 {
                let s = self.0[i][k];
                for j in 0..4 {
                    m.0[i][j] += s * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl Neg for SpinorMatrix {
    type Output = SpinorMatrix;
    fn neg(self) -> SpinorMatrix {
        self.scale(c(-1.0, 0.0))
    }
}

impl crate::reduce::Zeroed for SpinorMatrix {
    fn zeroed() -> Self {
        SpinorMatrix::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        // sigma_1 sigma_2 = i sigma_3 and cyclic.
        for (a, b, cidx) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            let lhs = Mat2::pauli(a) * Mat2::pauli(b);
            let rhs = Mat2::pauli(cidx).scale(crate::IM);
            assert_eq!(lhs, rhs, "sigma_{a} sigma_{b} != i sigma_{cidx}");
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = SpinorMatrix([
            [c(1.0, 0.5), c(0.0, 1.0), c(2.0, 0.0), c(0.0, 0.0)],
            [c(0.0, -1.0), c(3.0, 0.0), c(0.0, 0.0), c(1.0, 1.0)],
            [c(0.5, 0.0), c(0.0, 0.0), c(1.0, -2.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(2.0, 1.0), c(0.0, 0.0), c(4.0, 0.0)],
        ]);
        let prod = m.inverse() * m;
        assert!(prod.max_diff(&SpinorMatrix::identity()) < 1e-13);
    }
}
