use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cone, cz, Real, C};

/// Relative threshold on the diagonal of `R` below which a least-squares
/// matrix is declared rank deficient.
pub const RANK_TOL: f64 = 1e-13;

/// Householder QR of a tall matrix, kept in factored form.
#[derive(Debug, Clone)]
pub struct QrFactorization<T: Real = f64> {
    /// `R` in the upper triangle, Householder vectors below it.
    qr: ComplexMatrix<T>,
    betas: Vec<T>,
    diag: Vec<C<T>>,
}

impl<T: Real> QrFactorization<T> {
    pub fn new(a: &ComplexMatrix<T>) -> Self {
        let (p, q) = (a.rows(), a.cols());
        let mut qr = a.clone();
        let steps = q.min(p);
        let mut betas = vec![T::zero(); steps];
        let mut diag = vec![cz(); steps];
        for k in 0..steps {
            let x: Vec<C<T>> = (k..p).map(|i| qr[(i, k)]).collect();
            let xnorm = crate::scalar::vnorm(&x);
            if xnorm == T::zero() {
                diag[k] = cz();
                continue;
            }
            let phase = if x[0] == cz() { cone() } else { x[0].unscale(x[0].norm()) };
            let alpha = -phase.scale(xnorm);
            let mut v = x;
            v[0] -= alpha;
            let vn2: T = v.iter().map(|z| z.norm_sqr()).sum();
            if vn2 == T::zero() {
                diag[k] = alpha;
                continue;
            }
            let beta = T::lit(2.0) / vn2;
            for j in (k + 1)..q {
                let mut dot = cz();
                for (i, vi) in v.iter().enumerate() {
                    dot += vi.conj() * qr[(k + i, j)];
                }
                let f = dot.scale(beta);
                for (i, vi) in v.iter().enumerate() {
                    qr[(k + i, j)] -= *vi * f;
                }
            }
            for (i, vi) in v.iter().enumerate() {
                qr[(k + i, k)] = *vi;
            }
            betas[k] = beta;
            diag[k] = alpha;
        }
        Self { qr, betas, diag }
    }

    /// `Qᴴ b` in place.
    pub fn apply_qh(&self, b: &mut [C<T>]) {
        let p = self.qr.rows();
        for (k, &beta) in self.betas.iter().enumerate() {
            if beta == T::zero() {
                continue;
            }
            let mut dot = cz();
            for i in k..p {
                dot += self.qr[(i, k)].conj() * b[i];
            }
            let f = dot.scale(beta);
            for i in k..p {
                b[i] -= self.qr[(i, k)] * f;
            }
        }
    }

    pub fn r_diagonal(&self) -> &[C<T>] {
        &self.diag
    }

    /// Minimizer of `‖A x − b‖₂`.
    pub fn solve_lstsq(&self, b: &[C<T>]) -> Result<Vec<C<T>>> {
        let q = self.qr.cols();
        let mut c = b.to_vec();
        self.apply_qh(&mut c);
        let dmax = self.diag.iter().fold(T::zero(), |m, z| m.max(z.norm()));
        let thr = T::lit(RANK_TOL) * dmax;
        let mut x = vec![cz(); q];
        for k in (0..q).rev() {
            let d = self.diag[k];
            if d.norm() <= thr || d == cz() {
                return Err(Error::RankDeficient {
                    index: k,
                    value: d.norm().as_f64(),
                });
            }
            let mut acc = c[k];
            for j in (k + 1)..q {
                acc -= self.qr[(k, j)] * x[j];
            }
            x[k] = acc / d;
        }
        Ok(x)
    }
}

/// Least-squares solution of an overdetermined (or square) system.
pub fn lstsq<T: Real>(a: &ComplexMatrix<T>, b: &[C<T>]) -> Result<Vec<C<T>>> {
    if a.rows() < a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "lstsq needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    QrFactorization::new(a).solve_lstsq(b)
}
