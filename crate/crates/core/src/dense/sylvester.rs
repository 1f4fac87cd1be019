//! Bartels-Stewart solver for `A X + X B = C`.
//!
//! With `A = Q R Qᴴ` and `B = U S Uᴴ` the equation becomes
//! `R Y + Y S = Qᴴ C U`, whose columns follow left to right from the
//! triangular systems `(R + s_ii I) y_i = d_i − Σ_{k<i} s_ki y_k`.

use super::schur::{schur, SchurFactorization};
use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cz, Real, C};

/// Relative threshold on `|r_ii + s_jj|` below which the operator is singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Reusable Bartels-Stewart solver for fixed `A`, `B`.
#[derive(Debug, Clone)]
pub struct SylvesterSolver<T: Real = f64> {
    a: SchurFactorization<T>,
    b: SchurFactorization<T>,
    min_gap: T,
}

impl<T: Real> SylvesterSolver<T> {
    pub fn new(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<Self> {
        Self::from_schur(schur(a)?, schur(b)?)
    }

    /// Builds the solver from precomputed Schur factors of `A` and `B`.
    pub fn from_schur(a: SchurFactorization<T>, b: SchurFactorization<T>) -> Result<Self> {
        let ra = a.eigenvalues();
        let sb = b.eigenvalues();
        let mut min_gap = T::infinity();
        for x in &ra {
            for y in &sb {
                min_gap = min_gap.min((x + y).norm());
            }
        }
        let scale = a.r.norm_fro() + b.r.norm_fro();
        let threshold = T::lit(SINGULAR_TOL) * scale;
        if ra.is_empty() || sb.is_empty() {
            min_gap = T::infinity();
        }
        if min_gap < threshold || (scale == T::zero() && !ra.is_empty() && !sb.is_empty()) {
            return Err(Error::SingularSylvester {
                min_gap: min_gap.as_f64(),
                threshold: threshold.as_f64(),
            });
        }
        Ok(Self { a, b, min_gap })
    }

    /// Smallest `|r_ii + s_jj|` over all pairs.
    pub fn min_gap(&self) -> T {
        self.min_gap
    }

    pub fn schur_a(&self) -> &SchurFactorization<T> {
        &self.a
    }

    pub fn schur_b(&self) -> &SchurFactorization<T> {
        &self.b
    }

    pub fn solve(&self, c: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let m = self.a.dim();
        let n = self.b.dim();
        assert_eq!((c.rows(), c.cols()), (m, n), "Sylvester right-hand side shape");
        let d = self.a.q.adjoint().matmul(c).matmul(&self.b.q);
        let y = solve_triangular_sylvester(&self.a.r, &self.b.r, d);
        self.a.q.matmul(&y.matmul(&self.b.q.adjoint()))
    }
}

/// Solves `R Y + Y S = D` for upper-triangular `R`, `S`, overwriting `D`.
pub fn solve_triangular_sylvester<T: Real>(
    r: &ComplexMatrix<T>,
    s: &ComplexMatrix<T>,
    mut d: ComplexMatrix<T>,
) -> ComplexMatrix<T> {
    let m = r.rows();
    let n = s.rows();
    for i in 0..n {
        // d_i -= Σ_{k<i} s_ki y_k, with y_k already stored in column k
        for k in 0..i {
            let ski = s[(k, i)];
            if ski == cz() {
                continue;
            }
            let (done, rest) = d.as_mut_slice().split_at_mut(i * m);
            let yk = &done[k * m..(k + 1) * m];
            let di = &mut rest[..m];
            for (dst, &src) in di.iter_mut().zip(yk) {
                *dst -= ski * src;
            }
        }
        let sii = s[(i, i)];
        let col = d.col_mut(i);
        for row in (0..m).rev() {
            let mut acc: C<T> = col[row];
            for j in (row + 1)..m {
                acc -= r[(row, j)] * col[j];
            }
            col[row] = acc / (r[(row, row)] + sii);
        }
    }
    d
}

/// One-shot `A X + X B = C`.
pub fn solve_sylvester<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    c: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    if !a.is_square() || !b.is_square() || c.rows() != a.rows() || c.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "Sylvester with A {}x{}, B {}x{}, C {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    Ok(SylvesterSolver::new(a, b)?.solve(c))
}
