//! Thin singular value decomposition by one-sided (Hestenes) Jacobi.
//!
//! Columns of a working copy of `A` are rotated pairwise until mutually
//! orthogonal; the accumulated rotations form `V`, the column norms are the
//! singular values and the normalized columns the left singular vectors.

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cone, cz, vdot, vnorm, Real, C};

const MAX_SWEEPS: usize = 80;

/// `(σ, u, v)` with `A v = σ u` and `Aᴴ u = σ v`.
#[derive(Debug, Clone)]
pub struct SingularTriplet<T: Real = f64> {
    pub sigma: T,
    pub u_left: Vec<C<T>>,
    pub v_right: Vec<C<T>>,
}

/// `A = U diag(σ) Vᴴ` with `σ` sorted descending.
#[derive(Debug, Clone)]
pub struct Svd<T: Real = f64> {
    pub sigma: Vec<T>,
    pub u: ComplexMatrix<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn sigma_max(&self) -> T {
        self.sigma.first().copied().unwrap_or_else(T::zero)
    }

    pub fn sigma_min(&self) -> T {
        self.sigma.last().copied().unwrap_or_else(T::zero)
    }

    /// Minimum-norm least-squares solution, discarding singular values below
    /// `rtol * σ_max`.
    pub fn solve_min_norm(&self, b: &[C<T>], rtol: T) -> Vec<C<T>> {
        let thr = rtol * self.sigma_max();
        let mut x = vec![cz(); self.v.rows()];
        for (k, &s) in self.sigma.iter().enumerate() {
            if s <= thr || s == T::zero() {
                continue;
            }
            let coef = vdot(self.u.col(k), b).unscale(s);
            crate::scalar::axpy(coef, self.v.col(k), &mut x);
        }
        x
    }
}

/// Thin SVD of an arbitrary matrix.
pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Result<Svd<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite("SVD input".into()));
    }
    if a.rows() < a.cols() {
        let s = svd_tall(&a.adjoint())?;
        return Ok(Svd {
            sigma: s.sigma,
            u: s.v,
            v: s.u,
        });
    }
    svd_tall(a)
}

fn svd_tall<T: Real>(a: &ComplexMatrix<T>) -> Result<Svd<T>> {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut v = ComplexMatrix::<T>::identity(n);
    let eps = T::epsilon();
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: T = w.col(p).iter().map(|z| z.norm_sqr()).sum();
                let beta: T = w.col(q).iter().map(|z| z.norm_sqr()).sum();
                if alpha == T::zero() || beta == T::zero() {
                    continue;
                }
                let gamma = vdot(w.col(p), w.col(q));
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma.unscale(g);
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s, e);
                rotate_pair(&mut v, p, q, c, s, e);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "one-sided Jacobi SVD",
            iterations: MAX_SWEEPS,
        });
    }
    let mut order: Vec<(usize, T)> = (0..n).map(|j| (j, vnorm(w.col(j)))).collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let sigma: Vec<T> = order.iter().map(|o| o.1).collect();
    let smax = sigma.first().copied().unwrap_or_else(T::zero);
    let mut u = ComplexMatrix::zeros(m, n);
    let mut vs = ComplexMatrix::zeros(n, n);
    for (k, &(j, s)) in order.iter().enumerate() {
        vs.col_mut(k).copy_from_slice(v.col(j));
        if s > T::zero() {
            let inv = T::one() / s;
            for (dst, src) in u.col_mut(k).iter_mut().zip(w.col(j)) {
                *dst = src.scale(inv);
            }
        }
    }
    // Re-orthogonalize left vectors in order of decreasing σ; vectors of tiny
    // or zero σ are replaced by an orthonormal completion.
    let tiny = eps * smax * T::lit((m.max(n)) as f64);
    let mut next_basis = 0usize;
    for k in 0..n {
        let mut col = u.col(k).to_vec();
        let good = sigma[k] > tiny;
        if good {
            for _ in 0..2 {
                for i in 0..k {
                    let h = vdot(u.col(i), &col);
                    crate::scalar::axpy(-h, u.col(i), &mut col);
                }
            }
        }
        let mut nrm = if good { vnorm(&col) } else { T::zero() };
        while nrm < T::lit(0.5) {
            // orthogonal completion from canonical basis vectors
            if next_basis >= m {
                break;
            }
            col = vec![cz(); m];
            col[next_basis] = cone();
            next_basis += 1;
            for _ in 0..2 {
                for i in 0..k {
                    let h = vdot(u.col(i), &col);
                    crate::scalar::axpy(-h, u.col(i), &mut col);
                }
            }
            nrm = vnorm(&col);
        }
        crate::scalar::normalize(&mut col);
        u.col_mut(k).copy_from_slice(&col);
    }
    Ok(Svd { sigma, u, v: vs })
}

#[inline]
fn rotate_pair<T: Real>(m: &mut ComplexMatrix<T>, p: usize, q: usize, c: T, s: T, e: C<T>) {
    let rows = m.rows();
    let data = m.as_mut_slice();
    let se = e.scale(s);
    let sec = e.conj().scale(s);
    for r in 0..rows {
        let x = data[p * rows + r];
        let y = data[q * rows + r];
        data[p * rows + r] = x.scale(c) - sec * y;
        data[q * rows + r] = se * x + y.scale(c);
    }
}

/// All singular values, descending.
pub fn singular_values<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<T>> {
    Ok(svd(a)?.sigma)
}

/// The `count` smallest singular triplets, ascending in `σ`.
pub fn smallest_singular_triplets<T: Real>(
    a: &ComplexMatrix<T>,
    count: usize,
) -> Result<Vec<SingularTriplet<T>>> {
    let k = a.rows().min(a.cols());
    if count == 0 || count > k {
        return Err(Error::InvalidConfig(format!(
            "requested {count} singular triplets of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let s = svd(a)?;
    Ok((0..count)
        .map(|i| {
            let j = k - 1 - i;
            SingularTriplet {
                sigma: s.sigma[j],
                u_left: s.u.col(j).to_vec(),
                v_right: s.v.col(j).to_vec(),
            }
        })
        .collect())
}
