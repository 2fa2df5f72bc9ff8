//! Deterministic pairwise (tree) reduction.
//!
//! Floating-point addition is not associative, so the value of a big sum
//! depends on the association order. Every large sum in this crate goes
//! through [`pairwise_sum`], whose tree shape depends only on the index range
//! (split at the midpoint, sequential below a fixed chunk size). The two
//! halves may run on different threads via `rayon::join`, but the association
//! order never changes, so results are bit-identical for any thread count.

use std::ops::Add;

use num_complex::Complex;

/// Below this many terms the reduction is a plain sequential fold.
/// Part of the reduction's definition: changing it changes rounding.
pub const CHUNK: usize = 1024;

/// Zero element for the accumulated type.
pub trait Zeroed: Copy + Add<Output = Self> + Send {
    fn zeroed() -> Self;
}

impl Zeroed for f64 {
    fn zeroed() -> Self {
        0.0
    }
}

impl Zeroed for Complex<f64> {
    fn zeroed() -> Self {
        Complex::new(0.0, 0.0)
    }
}

/// Sum `f(i)` for `i in 0..n` with the fixed pairwise tree.
pub fn pairwise_sum<T, F>(n: usize, f: &F) -> T
where
    T: Zeroed,
    F: Fn(usize) -> T + Sync,
{
    pairwise_range(0, n, f)
}

fn pairwise_range<T, F>(lo: usize, hi: usize, f: &F) -> T
where
    T: Zeroed,
    F: Fn(usize) -> T + Sync,
{
    let len = hi - lo;
    if len <= CHUNK {
        let mut acc = T::zeroed();
        for i in lo..hi {
            acc = acc + f(i);
        }
        return acc;
    }
    let mid = lo + len / 2;
    let (a, b) = rayon::join(|| pairwise_range(lo, mid, f), || pairwise_range(mid, hi, f));
    a + b
}

// Array sums need Add on the array itself.
#[doc(hidden)]
#[derive(Copy, Clone)]
pub struct ArraySum<T, const N: usize>(pub [T; N]);

impl<T: Zeroed, const N: usize> Add for ArraySum<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0.iter()) {
            *o = *o + *r;
        }
        ArraySum(out)
    }
}

impl<T: Zeroed, const N: usize> Zeroed for ArraySum<T, N> {
    fn zeroed() -> Self {
        ArraySum([T::zeroed(); N])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_sequential_on_small_input() {
        let data: Vec<f64> = (0..100).map(|i| (i as f64).sin()).collect();
        let tree = pairwise_sum(data.len(), &|i| data[i]);
        let seq: f64 = data.iter().sum();
        assert_eq!(tree, seq, "below CHUNK the tree is the sequential fold");
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let n = 100_000;
        let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);

        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let s1 = pool1.install(|| pairwise_sum(n, &f));
        let s4 = pool4.install(|| pairwise_sum(n, &f));
        assert_eq!(s1.to_bits(), s4.to_bits());
    }

    #[test]
    fn complex_and_array_sums() {
        let n = 5000;
        let f = |i: usize| Complex::new(i as f64, -(i as f64));
        let s: Complex<f64> = pairwise_sum(n, &f);
        let expect = (n * (n - 1) / 2) as f64;
        assert_eq!(s, Complex::new(expect, -expect));

        let g = |i: usize| ArraySum([i as f64, 1.0]);
        let ArraySum([total, count]) = pairwise_sum(n, &g);
        assert_eq!(total, expect);
        assert_eq!(count, n as f64);
    }
}
