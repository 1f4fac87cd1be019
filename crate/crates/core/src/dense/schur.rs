//! Complex Schur decomposition `A = Q R Qᴴ`.
//!
//! Householder reduction to upper Hessenberg form followed by implicit
//! single-shift QR sweeps with Wilkinson shifts and deflation. Every sweep is
//! applied to the full matrix (not just the active window) so that `R` comes
//! out as the complete triangular factor, and the rotations are accumulated
//! into `Q`.

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cone, cre, cz, Real, C};

/// Sweeps allowed per unit of dimension before the iteration gives up.
pub const SWEEPS_PER_DIM: usize = 30;

/// `A = Q R Qᴴ` with `Q` unitary and `R` upper triangular.
#[derive(Debug, Clone)]
pub struct SchurFactorization<T: Real = f64> {
    pub q: ComplexMatrix<T>,
    pub r: ComplexMatrix<T>,
}

impl<T: Real> SchurFactorization<T> {
    pub fn eigenvalues(&self) -> Vec<C<T>> {
        self.r.diagonal()
    }

    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    /// `Q R Qᴴ`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.q.matmul(&self.r).matmul(&self.q.adjoint())
    }

    /// Reorders the factorization so that `R[0,0], R[1,1], ...` follow
    /// `order`, where `order[i]` is the current diagonal position that should
    /// end up at position `i`. Implemented with adjacent swaps.
    pub fn reorder(&mut self, order: &[usize]) {
        let n = self.dim();
        assert_eq!(order.len(), n);
        // track where each original index currently sits
        let mut pos: Vec<usize> = (0..n).collect();
        let mut at: Vec<usize> = (0..n).collect();
        for (target, &orig) in order.iter().enumerate() {
            let mut cur = pos[orig];
            while cur > target {
                swap_adjacent(&mut self.r, &mut self.q, cur - 1);
                let a = at[cur - 1];
                let b = at[cur];
                at[cur - 1] = b;
                at[cur] = a;
                pos[b] = cur - 1;
                pos[a] = cur;
                cur -= 1;
            }
        }
    }
}

/// Givens rotation `G = [[c, s], [-conj(s), c]]` with `G [f; g] = [r; 0]`.
#[inline]
pub(crate) fn givens<T: Real>(f: C<T>, g: C<T>) -> (T, C<T>, C<T>) {
    if g == cz() {
        return (T::one(), cz(), f);
    }
    if f == cz() {
        let ag = g.norm();
        return (T::zero(), g.conj().unscale(ag), cre(ag));
    }
    let af = f.norm();
    let ag = g.norm();
    let rho = af.hypot(ag);
    let phase = f.unscale(af);
    let c = af / rho;
    let s = phase * g.conj().unscale(rho);
    (c, s, phase.scale(rho))
}

/// Rows `i, k` of `m` over columns `cols` ← `G [row_i; row_k]`.
#[inline]
fn rot_rows<T: Real>(
    m: &mut ComplexMatrix<T>,
    i: usize,
    k: usize,
    c: T,
    s: C<T>,
    cols: std::ops::Range<usize>,
) {
    for j in cols {
        let x = m[(i, j)];
        let y = m[(k, j)];
        m[(i, j)] = x.scale(c) + s * y;
        m[(k, j)] = y.scale(c) - s.conj() * x;
    }
}

/// Columns `i, k` of `m` over rows `rows` ← `[col_i, col_k] Gᴴ`.
#[inline]
fn rot_cols<T: Real>(
    m: &mut ComplexMatrix<T>,
    i: usize,
    k: usize,
    c: T,
    s: C<T>,
    rows: std::ops::Range<usize>,
) {
    let nr = m.rows();
    let data = m.as_mut_slice();
    for r in rows {
        let x = data[i * nr + r];
        let y = data[k * nr + r];
        data[i * nr + r] = x.scale(c) + s.conj() * y;
        data[k * nr + r] = y.scale(c) - s * x;
    }
}

/// Swaps diagonal entries `k` and `k+1` of the triangular `t`, updating `q`.
fn swap_adjacent<T: Real>(t: &mut ComplexMatrix<T>, q: &mut ComplexMatrix<T>, k: usize) {
    let n = t.rows();
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    if t11 == t22 {
        return;
    }
    let (c, s, _) = givens(t[(k, k + 1)], t22 - t11);
    if k + 2 < n {
        rot_rows(t, k, k + 1, c, s, (k + 2)..n);
    }
    rot_cols(t, k, k + 1, c, s, 0..k);
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
    let nq = q.rows();
    rot_cols(q, k, k + 1, c, s, 0..nq);
}

/// Reduces `a` to upper Hessenberg form `H = Qᴴ A Q`; returns `(H, Q)`.
pub fn hessenberg<T: Real>(a: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    let mut v = vec![cz::<T>(); n];
    for k in 0..(n - 2) {
        let len = n - k - 1;
        let x: Vec<C<T>> = (0..len).map(|i| h[(k + 1 + i, k)]).collect();
        let xnorm = crate::scalar::vnorm(&x);
        if xnorm == T::zero() {
            continue;
        }
        let tail = crate::scalar::vnorm(&x[1..]);
        if tail == T::zero() {
            continue;
        }
        let phase = if x[0] == cz() {
            cone()
        } else {
            x[0].unscale(x[0].norm())
        };
        let alpha = -phase.scale(xnorm);
        v[..len].copy_from_slice(&x);
        v[0] -= alpha;
        let vnorm2 = v[..len].iter().map(|z| z.norm_sqr()).sum::<T>();
        let beta = T::lit(2.0) / vnorm2;
        let vv = &v[..len];
        // H ← (I - β v vᴴ) H on rows k+1..n
        for j in 0..n {
            let mut dot = cz();
            for i in 0..len {
                dot += vv[i].conj() * h[(k + 1 + i, j)];
            }
            let f = dot.scale(beta);
            for i in 0..len {
                h[(k + 1 + i, j)] -= vv[i] * f;
            }
        }
        // H ← H (I - β v vᴴ) on columns k+1..n
        for mtx in [&mut h, &mut q] {
            for r in 0..n {
                let mut dot = cz();
                for i in 0..len {
                    dot += mtx[(r, k + 1 + i)] * vv[i];
                }
                let f = dot.scale(beta);
                for i in 0..len {
                    mtx[(r, k + 1 + i)] -= f * vv[i].conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            h[(i, k)] = cz();
        }
    }
    (h, q)
}

/// Complex Schur decomposition of a square matrix.
pub fn schur<T: Real>(a: &ComplexMatrix<T>) -> Result<SchurFactorization<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Schur decomposition of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("Schur input".into()));
    }
    let n = a.rows();
    let (mut h, mut q) = hessenberg(a);
    if n <= 1 {
        return Ok(SchurFactorization { q, r: h });
    }
    let eps = T::epsilon();
    let norm = h.norm_fro();
    let floor = eps * norm * T::lit(1e-3);
    let budget = SWEEPS_PER_DIM * n;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        // locate the top of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= eps * diag || sub <= floor {
                h[(lo, lo - 1)] = cz();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        sweeps += 1;
        since_deflation += 1;
        if sweeps > budget {
            return Err(Error::SchurNoConvergence { n, sweeps: budget });
        }
        let shift = if since_deflation % 10 == 0 {
            // exceptional shift breaks cycles
            h[(hi, hi)] + cre(h[(hi, hi - 1)].norm() * T::lit(0.75))
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        let mut x = h[(lo, lo)] - shift;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            if k > lo {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s, r) = givens(x, y);
            let c0 = if k > lo { k - 1 } else { k };
            rot_rows(&mut h, k, k + 1, c, s, c0..n);
            if k > lo {
                h[(k, k - 1)] = r;
                h[(k + 1, k - 1)] = cz();
            }
            let r1 = (k + 3).min(hi + 1);
            rot_cols(&mut h, k, k + 1, c, s, 0..r1);
            rot_cols(&mut q, k, k + 1, c, s, 0..n);
        }
    }
    // anything below the diagonal is rounding noise at this point
    for j in 0..n {
        for i in (j + 1)..n {
            h[(i, j)] = cz();
        }
    }
    Ok(SchurFactorization { q, r: h })
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift<T: Real>(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> C<T> {
    let half = T::lit(0.5);
    let m = (a + d).scale(half);
    let diff = (a - d).scale(half);
    let disc = (diff * diff + b * c).sqrt();
    let e1 = m + disc;
    let e2 = m - disc;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// Eigenvectors of an upper-triangular matrix, one column per diagonal entry,
/// each normalized to unit length. Near-zero pivots are perturbed so that
/// defective eigenvalues still yield (nearly parallel) vectors.
pub fn triangular_eigenvectors<T: Real>(r: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = r.rows();
    let eps = T::epsilon();
    let norm = r.norm_fro();
    let tiny = T::min_positive_value() / eps;
    let mut x = ComplexMatrix::zeros(n, n);
    let big = T::one() / (eps * eps);
    for k in 0..n {
        let lam = r[(k, k)];
        let smin = (eps * lam.norm()).max(eps * norm * T::lit(1e-2)).max(tiny);
        let col = x.col_mut(k);
        col[k] = cone();
        for i in (0..k).rev() {
            let mut acc: C<T> = cz();
            for j in (i + 1)..=k {
                acc += r[(i, j)] * col[j];
            }
            let mut den = r[(i, i)] - lam;
            if den.norm() < smin {
                den = cre(smin);
            }
            col[i] = -acc / den;
            if col[i].norm() > big {
                let s = T::one() / col[i].norm();
                for z in col[i..=k].iter_mut() {
                    *z = z.scale(s);
                }
            }
        }
        crate::scalar::normalize(&mut col[..=k]);
    }
    x
}
