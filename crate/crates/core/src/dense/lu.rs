use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct LuFactorization<T: Real = f64> {
    lu: ComplexMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> LuFactorization<T> {
    pub fn new(a: &ComplexMatrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LU of a {}x{} matrix",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == T::zero() || pmax <= T::epsilon() * T::epsilon() * scale {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let inv = C::new(T::one(), T::zero()) / lu[(k, k)];
            for i in (k + 1)..n {
                lu[(i, k)] = lu[(i, k)] * inv;
            }
            for j in (k + 1)..n {
                let ukj = lu[(k, j)];
                if ukj.re == T::zero() && ukj.im == T::zero() {
                    continue;
                }
                for i in (k + 1)..n {
                    let lik = lu[(i, k)];
                    lu[(i, j)] -= lik * ukj;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `A x = b` in place.
    pub fn solve_vec(&self, b: &mut [C<T>]) {
        let n = self.dim();
        let pb: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        b.copy_from_slice(&pb);
        for j in 0..n {
            let bj = b[j];
            for i in (j + 1)..n {
                b[i] -= self.lu[(i, j)] * bj;
            }
        }
        for j in (0..n).rev() {
            b[j] /= self.lu[(j, j)];
            let bj = b[j];
            for i in 0..j {
                b[i] -= self.lu[(i, j)] * bj;
            }
        }
    }

    /// `A⁻¹ B`.
    pub fn solve(&self, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(b.rows(), self.dim());
        let mut x = b.clone();
        for j in 0..x.cols() {
            self.solve_vec(x.col_mut(j));
        }
        x
    }

    /// `B A⁻ᵀ`, computed as `(A⁻¹ Bᵀ)ᵀ`.
    pub fn solve_right_transpose(&self, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.solve(&b.transpose()).transpose()
    }

    /// Smallest pivot magnitude relative to the largest; a cheap conditioning hint.
    pub fn pivot_ratio(&self) -> T {
        let d: Vec<T> = (0..self.dim()).map(|i| self.lu[(i, i)].norm()).collect();
        let mx = d.iter().fold(T::zero(), |a, &b| a.max(b));
        let mn = d.iter().fold(T::infinity(), |a, &b| a.min(b));
        if mx == T::zero() {
            T::zero()
        } else {
            mn / mx
        }
    }
}
