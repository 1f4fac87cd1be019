//! Seeded random matrices for tests, oracles, and Arnoldi start vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ComplexMatrix;
use crate::scalar::{Real, C};

/// Deterministic generator of random test data.
pub struct MatrixRng {
    rng: ChaCha8Rng,
}

impl MatrixRng {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform sample in `[-1, 1)`.
    pub fn uniform<T: Real>(&mut self) -> T {
        T::lit(self.rng.gen_range(-1.0..1.0))
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn scalar<T: Real>(&mut self) -> C<T> {
        C::new(self.uniform(), self.uniform())
    }

    pub fn vector<T: Real>(&mut self, n: usize) -> Vec<C<T>> {
        (0..n).map(|_| self.scalar()).collect()
    }

    pub fn complex<T: Real>(&mut self, rows: usize, cols: usize) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.scalar())
    }

    pub fn real<T: Real>(&mut self, rows: usize, cols: usize) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(rows, cols, |_, _| C::new(self.uniform(), T::zero()))
    }

    /// Random real symmetric positive definite matrix `B Bᵀ + n I`.
    pub fn spd<T: Real>(&mut self, n: usize) -> ComplexMatrix<T> {
        let b = self.real::<T>(n, n);
        let mut s = b.matmul(&b.transpose());
        for i in 0..n {
            s[(i, i)] += C::new(T::lit(n as f64), T::zero());
        }
        s
    }

    /// Random real symmetric matrix.
    pub fn symmetric<T: Real>(&mut self, n: usize) -> ComplexMatrix<T> {
        let b = self.real::<T>(n, n);
        let bt = b.transpose();
        (&b + &bt).scale_real(T::lit(0.5))
    }

    /// Random real skew-symmetric matrix.
    pub fn skew<T: Real>(&mut self, n: usize) -> ComplexMatrix<T> {
        let b = self.real::<T>(n, n);
        let bt = b.transpose();
        (&b - &bt).scale_real(T::lit(0.5))
    }
}
