//! Krylov-Schur eigensolver for the eigenvalues of `Δ₁z = λΔ₀z` closest to a
//! shift `σ`.
//!
//! The solver only sees the shift-inverted operator `Op = (Δ₁ − σΔ₀)⁻¹Δ₀`
//! through [`ShiftInvertOperator`]; eigenvalues `ν` of `Op` map back by
//! `λ = σ + 1/ν`, so the largest `|ν|` are the `λ` closest to `σ`.
//!
//! Between restarts the basis satisfies `Op V_p = V_{p+1} H` with `H` of size
//! `(p+1) × p`; after a restart the leading `k × k` block of `H` is upper
//! triangular and row `k` carries the coupling vector `b`.

use crate::dense::random::MatrixRng;
use crate::dense::schur::triangular_eigenvectors;
use crate::dense::{schur, ComplexMatrix, LuFactorization};
use crate::error::{Error, Result};
use crate::mfrd::ShiftInvertCache;
use crate::scalar::{cone, cz, normalize, vdot, vnorm, Real, C};

/// Default seed of the start vector.
pub const DEFAULT_SEED: u64 = 0x5eed_2e60;

/// Linear operator `Op = (A − σB)⁻¹B` for some pencil `(A, B)`.
pub trait ShiftInvertOperator<T: Real> {
    fn dim(&self) -> usize;
    fn shift(&self) -> C<T>;
    fn apply(&self, x: &[C<T>]) -> Vec<C<T>>;
}

impl<T: Real> ShiftInvertOperator<T> for ShiftInvertCache<'_, T> {
    fn dim(&self) -> usize {
        ShiftInvertCache::dim(self)
    }

    fn shift(&self) -> C<T> {
        self.sigma()
    }

    fn apply(&self, x: &[C<T>]) -> Vec<C<T>> {
        ShiftInvertCache::apply(self, x)
    }
}

/// `(A − σB)⁻¹B` from explicit matrices, via a dense LU.
#[derive(Debug, Clone)]
pub struct DenseShiftInvert<T: Real = f64> {
    sigma: C<T>,
    b: ComplexMatrix<T>,
    lu: LuFactorization<T>,
}

impl<T: Real> DenseShiftInvert<T> {
    pub fn new(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, sigma: C<T>) -> Result<Self> {
        let mut shifted = a.clone();
        shifted.add_scaled(-sigma, b);
        Ok(Self {
            sigma,
            b: b.clone(),
            lu: LuFactorization::new(&shifted)?,
        })
    }
}

impl<T: Real> ShiftInvertOperator<T> for DenseShiftInvert<T> {
    fn dim(&self) -> usize {
        self.b.rows()
    }

    fn shift(&self) -> C<T> {
        self.sigma
    }

    fn apply(&self, x: &[C<T>]) -> Vec<C<T>> {
        let mut y = self.b.matvec(x);
        self.lu.solve_vec(&mut y);
        y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArnoldiOptions<T: Real = f64> {
    /// Number of wanted eigenvalues.
    pub m: usize,
    /// Largest Krylov dimension before a restart.
    pub max_subspace: usize,
    pub max_restarts: usize,
    /// Relative Ritz residual tolerance.
    pub tol: T,
    pub seed: u64,
    /// Record basis diagnostics at every restart boundary (costs extra applies).
    pub diagnostics: bool,
}

impl<T: Real> ArnoldiOptions<T> {
    /// Defaults for `m` wanted eigenvalues: subspace `4m + 4`, 40 restarts,
    /// tolerance `max(1e-12, 100 ε)`.
    pub fn with_m(m: usize) -> Self {
        Self {
            m,
            max_subspace: 4 * m + 4,
            max_restarts: 40,
            tol: T::lit(1e-12).max(T::lit(100.0) * T::epsilon()),
            seed: DEFAULT_SEED,
            diagnostics: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidConfig("Arnoldi needs m >= 1".into()));
        }
        if self.max_subspace < 2 * self.m + 2 {
            return Err(Error::InvalidConfig(format!(
                "max_subspace {} is below 2m+2 = {}",
                self.max_subspace,
                2 * self.m + 2
            )));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::InvalidConfig("Arnoldi tolerance must be positive".into()));
        }
        Ok(())
    }
}

impl<T: Real> Default for ArnoldiOptions<T> {
    fn default() -> Self {
        Self::with_m(8)
    }
}

/// Approximate eigenpair of `(Δ₁, Δ₀)`.
#[derive(Debug, Clone)]
pub struct RitzPair<T: Real = f64> {
    pub lambda: C<T>,
    /// Ritz value of the shift-inverted operator, `λ = σ + 1/ν`.
    pub nu: C<T>,
    /// Unit-norm Ritz vector.
    pub z: Vec<C<T>>,
    /// `|h_{p+1,p} · (last component of the Ritz vector)|`.
    pub residual_estimate: T,
    pub converged: bool,
}

/// Basis quality at one restart boundary.
#[derive(Debug, Clone, Copy)]
pub struct RestartDiagnostics<T: Real = f64> {
    /// `‖VᴴV − I‖_F` over the `p + 1` basis vectors.
    pub orthogonality: T,
    /// `‖Op V_p − V_{p+1} H‖_F / ‖H‖_F`.
    pub relation: T,
}

#[derive(Debug, Clone)]
pub struct ArnoldiOutcome<T: Real = f64> {
    /// Up to `m` pairs, sorted by `|λ − σ|` ascending.
    pub pairs: Vec<RitzPair<T>>,
    /// The whole space was exhausted with fewer than `m` eigenvalues.
    pub breakdown: bool,
    pub restarts: usize,
    pub applies: usize,
    pub diagnostics: Vec<RestartDiagnostics<T>>,
}

impl<T: Real> ArnoldiOutcome<T> {
    pub fn all_converged(&self) -> bool {
        self.pairs.iter().all(|p| p.converged)
    }

    pub fn converged(&self) -> impl Iterator<Item = &RitzPair<T>> {
        self.pairs.iter().filter(|p| p.converged)
    }
}

/// Runs Krylov-Schur and returns the `m` leading pairs, converged or not,
/// each flagged. Fails only on invalid options or a Schur failure.
pub fn krylov_schur<T: Real, O: ShiftInvertOperator<T> + ?Sized>(
    op: &O,
    opts: &ArnoldiOptions<T>,
) -> Result<ArnoldiOutcome<T>> {
    opts.validate()?;
    let n = op.dim();
    if n == 0 {
        return Err(Error::DimensionMismatch("Arnoldi on an empty operator".into()));
    }
    let p_max = opts.max_subspace.min(n);
    let want = opts.m.min(n);
    let mut rng = MatrixRng::new(opts.seed);
    let mut v = ComplexMatrix::<T>::zeros(n, p_max + 1);
    let mut h = ComplexMatrix::<T>::zeros(p_max + 1, p_max);
    let mut start = rng.vector::<T>(n);
    normalize(&mut start);
    v.col_mut(0).copy_from_slice(&start);

    let mut k = 0usize;
    let mut restarts = 0usize;
    let mut applies = 0usize;
    let mut diagnostics = Vec::new();
    loop {
        // expansion from k to p
        let mut p = k;
        let mut exhausted = false;
        while p < p_max {
            let mut w = op.apply(v.col(p));
            applies += 1;
            let w_norm = vnorm(&w);
            let coeffs = orthogonalize(&v, p + 1, &mut w);
            for (i, c) in coeffs.into_iter().enumerate() {
                h[(i, p)] += c;
            }
            let beta = vnorm(&w);
            p += 1;
            if beta > T::lit(1e-12) * w_norm && beta > T::zero() {
                h[(p, p - 1)] = C::new(beta, T::zero());
                let inv = T::one() / beta;
                for (dst, src) in v.col_mut(p).iter_mut().zip(&w) {
                    *dst = src.scale(inv);
                }
            } else {
                // invariant subspace: continue with a fresh orthogonal direction
                h[(p, p - 1)] = cz();
                if p == n {
                    exhausted = true;
                    break;
                }
                let mut fresh = rng.vector::<T>(n);
                orthogonalize(&v, p, &mut fresh);
                normalize(&mut fresh);
                v.col_mut(p).copy_from_slice(&fresh);
            }
        }
        if p == n {
            exhausted = true;
        }
        if opts.diagnostics {
            diagnostics.push(measure(op, &v, &h, p, exhausted));
        }

        let hp = h.submatrix(0, p, 0, p);
        let mut sf = schur(&hp)?;
        let ev = sf.eigenvalues();
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| {
            ev[b].norm()
                .partial_cmp(&ev[a].norm())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        sf.reorder(&order);
        // residual row mapped into Schur coordinates
        let b_row: Vec<C<T>> = if exhausted {
            vec![cz(); p]
        } else {
            (0..p)
                .map(|j| (0..p).fold(cz(), |acc, i| acc + h[(p, i)] * sf.q[(i, j)]))
                .collect()
        };
        let x = triangular_eigenvectors(&sf.r);
        let count = want.min(p);
        let mut status = Vec::with_capacity(count);
        for i in 0..count {
            let nu = sf.r[(i, i)];
            let res = (0..=i).fold(cz::<T>(), |acc, j| acc + b_row[j] * x[(j, i)]).norm();
            let ok = nu.norm() > T::zero() && res <= opts.tol * nu.norm();
            status.push((nu, res, ok));
        }
        let done = status.iter().all(|s| s.2) || exhausted;
        if done || restarts >= opts.max_restarts {
            let pairs = (0..count)
                .filter(|&i| status[i].0.norm() > T::zero())
                .map(|i| {
                    let (nu, res, ok) = status[i];
                    let yx: Vec<C<T>> = sf.q.matvec(x.col(i));
                    let mut z = vec![cz(); n];
                    for (j, &c) in yx.iter().enumerate() {
                        crate::scalar::axpy(c, v.col(j), &mut z);
                    }
                    normalize(&mut z);
                    RitzPair {
                        lambda: op.shift() + cone::<T>() / nu,
                        nu,
                        z,
                        residual_estimate: res,
                        converged: ok,
                    }
                })
                .collect();
            return Ok(ArnoldiOutcome {
                pairs,
                breakdown: exhausted && n < opts.m,
                restarts,
                applies,
                diagnostics,
            });
        }

        // thick restart keeping the 2m leading Schur vectors
        let keep = (2 * opts.m).min(p - 1).max(1);
        let vp = v.submatrix(0, n, 0, p);
        let kept = vp.matmul(&sf.q.submatrix(0, p, 0, keep));
        let last = v.col(p).to_vec();
        v = ComplexMatrix::zeros(n, p_max + 1);
        for j in 0..keep {
            v.col_mut(j).copy_from_slice(kept.col(j));
        }
        v.col_mut(keep).copy_from_slice(&last);
        h = ComplexMatrix::zeros(p_max + 1, p_max);
        for j in 0..keep {
            for i in 0..=j {
                h[(i, j)] = sf.r[(i, j)];
            }
            h[(keep, j)] = b_row[j];
        }
        k = keep;
        restarts += 1;
    }
}

/// Classical Gram-Schmidt with one reorthogonalization against the first
/// `cols` basis vectors; returns the accumulated coefficients.
fn orthogonalize<T: Real>(v: &ComplexMatrix<T>, cols: usize, w: &mut [C<T>]) -> Vec<C<T>> {
    let mut total = vec![cz(); cols];
    for _ in 0..2 {
        let coeffs: Vec<C<T>> = (0..cols).map(|i| vdot(v.col(i), w)).collect();
        for (i, &c) in coeffs.iter().enumerate() {
            crate::scalar::axpy(-c, v.col(i), w);
            total[i] += c;
        }
    }
    total
}

fn measure<T: Real, O: ShiftInvertOperator<T> + ?Sized>(
    op: &O,
    v: &ComplexMatrix<T>,
    h: &ComplexMatrix<T>,
    p: usize,
    exhausted: bool,
) -> RestartDiagnostics<T> {
    let n = v.rows();
    let cols = if exhausted { p } else { p + 1 };
    let vb = v.submatrix(0, n, 0, cols);
    let gram = vb.adjoint().matmul(&vb);
    let orthogonality = (&gram - &ComplexMatrix::identity(cols)).norm_fro();
    let hb = h.submatrix(0, cols, 0, p);
    let vh = vb.matmul(&hb);
    let mut err = T::zero();
    for j in 0..p {
        let opv = op.apply(v.col(j));
        err += opv
            .iter()
            .zip(vh.col(j))
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<T>();
    }
    RestartDiagnostics {
        orthogonality,
        relation: err.sqrt() / hb.norm_fro().max(T::min_positive_value()),
    }
}

/// The `m` eigenvalues of `Δ₁z = λΔ₀z` closest to the operator's shift.
///
/// Returns [`Error::NoConvergence`] when some wanted pair is still
/// unconverged after `max_restarts`; use [`krylov_schur`] to keep the
/// converged subset. On breakdown the outcome carries the pairs found and
/// `breakdown = true`.
pub fn eigs_closest<T: Real, O: ShiftInvertOperator<T> + ?Sized>(
    op: &O,
    opts: &ArnoldiOptions<T>,
) -> Result<ArnoldiOutcome<T>> {
    let out = krylov_schur(op, opts)?;
    if !out.all_converged() {
        return Err(Error::NoConvergence {
            what: "Krylov-Schur",
            iterations: out.restarts,
        });
    }
    Ok(out)
}
