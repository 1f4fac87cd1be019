//! Gauss-Newton on the zero-residual system
//!
//! ```text
//! F(u, y, λ, μ) = [ W u ; Wᵀ y ; yᵀ(2λL₂ + L₁)u ; (uᴴu − 1)/2 ; (yᴴy − 1)/2 ] = 0,
//! W = λ²L₂ + λL₁ + L₀ + μM,
//! ```
//!
//! with `y = conj(z)` for the left eigenvector `z`. Each step solves the
//! `(2n+3) × (2n+2)` least-squares problem `J Δs = −F`.

use crate::dense::{lstsq, smallest_singular_triplets, svd, ComplexMatrix};
use crate::error::{Error, Result};
use crate::mfrd::QuadraticPencil;
use crate::scalar::{cre, vdot, vdotu, vnorm, Real, C};

/// Residual reduction factor below which an iteration counts as stagnating.
const STAGNATION_FACTOR: f64 = 0.9;
/// Consecutive stagnating iterations before giving up.
const STAGNATION_WINDOW: usize = 3;
/// Step halvings allowed per iteration when the residual grows.
pub const MAX_HALVINGS: usize = 5;
/// Default iteration cap.
pub const DEFAULT_MAXIT: usize = 30;

/// Iterate of the Gauss-Newton method.
#[derive(Debug, Clone)]
pub struct GaussNewtonState<T: Real = f64> {
    /// Right eigenvector.
    pub u: Vec<C<T>>,
    /// Conjugated left eigenvector.
    pub y: Vec<C<T>>,
    pub lambda: C<T>,
    pub mu: C<T>,
    pub residual_norm: T,
    pub iterations: usize,
    /// `‖F‖` at the start and after every iteration.
    pub history: Vec<T>,
}

impl<T: Real> GaussNewtonState<T> {
    pub fn new(pencil: &QuadraticPencil<T>, u: Vec<C<T>>, y: Vec<C<T>>, lambda: C<T>, mu: C<T>) -> Self {
        let r = vnorm(&residual(pencil, &u, &y, lambda, mu));
        Self {
            u,
            y,
            lambda,
            mu,
            residual_norm: r,
            iterations: 0,
            history: vec![r],
        }
    }

    /// Left eigenvector `z = conj(y)`.
    pub fn z(&self) -> Vec<C<T>> {
        self.y.iter().map(|v| v.conj()).collect()
    }
}

/// `W(k, ω) = (ik)²L₂ + ikL₁ + L₀ + ω²M`.
pub fn evaluate_w<T: Real>(pencil: &QuadraticPencil<T>, k: C<T>, omega: C<T>) -> ComplexMatrix<T> {
    pencil.eval(k, omega)
}

/// `F(u, y, λ, μ)`.
pub fn residual<T: Real>(pencil: &QuadraticPencil<T>, u: &[C<T>], y: &[C<T>], lambda: C<T>, mu: C<T>) -> Vec<C<T>> {
    let w = pencil.eval_lambda_mu(lambda, mu);
    let d = pencil.d_lambda(lambda);
    let half = T::lit(0.5);
    let mut f = w.matvec(u);
    f.extend(w.transpose_matvec(y));
    f.push(vdotu(y, &d.matvec(u)));
    f.push(cre((vdot(u, u).re - T::one()) * half));
    f.push(cre((vdot(y, y).re - T::one()) * half));
    f
}

/// The `(2n+3) × (2n+2)` Jacobian of `F` with columns ordered `(u, y, λ, μ)`.
pub fn jacobian<T: Real>(pencil: &QuadraticPencil<T>, u: &[C<T>], y: &[C<T>], lambda: C<T>, mu: C<T>) -> ComplexMatrix<T> {
    let n = pencil.n();
    let w = pencil.eval_lambda_mu(lambda, mu);
    let d = pencil.d_lambda(lambda);
    let wt = w.transpose();
    let dt = d.transpose();
    let mut j = ComplexMatrix::zeros(2 * n + 3, 2 * n + 2);
    j.set_block(0, 0, &w);
    j.set_block(n, n, &wt);
    let du = d.matvec(u);
    let mu_ = pencil.m().matvec(u);
    let dty = dt.matvec(y);
    let mty = pencil.m().transpose_matvec(y);
    for i in 0..n {
        j[(i, 2 * n)] = du[i];
        j[(i, 2 * n + 1)] = mu_[i];
        j[(n + i, 2 * n)] = dty[i];
        j[(n + i, 2 * n + 1)] = mty[i];
        j[(2 * n, i)] = dty[i];
        j[(2 * n, n + i)] = du[i];
        j[(2 * n + 1, i)] = u[i].conj();
        j[(2 * n + 2, n + i)] = y[i].conj();
    }
    let two = T::lit(2.0);
    j[(2 * n, 2 * n)] = vdotu(y, &pencil.l2().matvec(u)) * two;
    j
}

/// Gauss-Newton correction `Δs` solving `J Δs ≈ −F` in the least-squares
/// sense, falling back to the minimum-norm SVD solution when `J` is
/// numerically rank deficient (as at curve crossings).
fn correction<T: Real>(j: &ComplexMatrix<T>, f: &[C<T>]) -> Result<Vec<C<T>>> {
    let rhs: Vec<C<T>> = f.iter().map(|v| -*v).collect();
    match lstsq(j, &rhs) {
        Ok(x) => Ok(x),
        Err(Error::RankDeficient { .. }) => Ok(svd(j)?.solve_min_norm(&rhs, T::lit(1e-12))),
        Err(e) => Err(e),
    }
}

/// One safeguarded Gauss-Newton step; returns the new state and the norm of
/// the full (unhalved) correction.
pub fn gauss_newton_step<T: Real>(pencil: &QuadraticPencil<T>, state: &GaussNewtonState<T>) -> Result<(GaussNewtonState<T>, T)> {
    let n = pencil.n();
    let f = residual(pencil, &state.u, &state.y, state.lambda, state.mu);
    let j = jacobian(pencil, &state.u, &state.y, state.lambda, state.mu);
    let ds = correction(&j, &f)?;
    let step_norm = vnorm(&ds);
    let r0 = vnorm(&f);
    let mut t = T::one();
    let mut trial;
    let mut halvings = 0;
    loop {
        let u: Vec<C<T>> = state.u.iter().zip(&ds[..n]).map(|(a, b)| a + b.scale(t)).collect();
        let y: Vec<C<T>> = state.y.iter().zip(&ds[n..2 * n]).map(|(a, b)| a + b.scale(t)).collect();
        let lambda = state.lambda + ds[2 * n].scale(t);
        let mu = state.mu + ds[2 * n + 1].scale(t);
        let r = vnorm(&residual(pencil, &u, &y, lambda, mu));
        trial = (u, y, lambda, mu, r);
        if r <= r0 || halvings == MAX_HALVINGS {
            break;
        }
        t = t * T::lit(0.5);
        halvings += 1;
    }
    let (u, y, lambda, mu, r) = trial;
    let mut history = state.history.clone();
    history.push(r);
    Ok((
        GaussNewtonState {
            u,
            y,
            lambda,
            mu,
            residual_norm: r,
            iterations: state.iterations + 1,
            history,
        },
        step_norm,
    ))
}

/// Default convergence tolerance `1e-10 · (‖L₀‖ + ‖L₁‖ + ‖L₂‖ + ‖M‖)`.
pub fn default_tol<T: Real>(pencil: &QuadraticPencil<T>) -> T {
    T::lit(1e-10) * pencil.scale()
}

/// Gauss-Newton from `(u₀, y₀, λ₀, μ₀)` until `‖F‖ ≤ tol`.
pub fn gauss_newton<T: Real>(
    pencil: &QuadraticPencil<T>,
    u0: &[C<T>],
    y0: &[C<T>],
    lambda0: C<T>,
    mu0: C<T>,
    tol: T,
    maxit: usize,
) -> Result<GaussNewtonState<T>> {
    let n = pencil.n();
    if u0.len() != n || y0.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "start vectors of length {} and {}, pencil size {n}",
            u0.len(),
            y0.len()
        )));
    }
    let mut state = GaussNewtonState::new(pencil, u0.to_vec(), y0.to_vec(), lambda0, mu0);
    let mut slow = 0usize;
    while state.residual_norm > tol {
        if state.iterations >= maxit {
            return Err(Error::NoConvergence {
                what: "Gauss-Newton",
                iterations: maxit,
            });
        }
        let prev = state.residual_norm;
        state = gauss_newton_step(pencil, &state)?.0;
        if !state.residual_norm.is_finite() {
            return Err(Error::NonFinite("Gauss-Newton iterate".into()));
        }
        if state.residual_norm > T::lit(STAGNATION_FACTOR) * prev {
            slow += 1;
            if slow >= STAGNATION_WINDOW && state.residual_norm > tol {
                return Err(Error::StagnatedResidual {
                    residual: state.residual_norm.as_f64(),
                    iterations: state.iterations,
                });
            }
        } else {
            slow = 0;
        }
    }
    Ok(state)
}

/// Start vectors from the smallest singular triplet of `W(λ₀, μ₀)`:
/// `u₀` its right singular vector and `y₀` the conjugate of the left one.
pub fn initial_vectors<T: Real>(pencil: &QuadraticPencil<T>, lambda0: C<T>, mu0: C<T>) -> Result<(Vec<C<T>>, Vec<C<T>>)> {
    let w = pencil.eval_lambda_mu(lambda0, mu0);
    let t = smallest_singular_triplets(&w, 1)?.swap_remove(0);
    Ok((t.v_right, t.u_left.iter().map(|v| v.conj()).collect()))
}

/// Extreme singular values `(σ_min, σ_max)` of the Jacobian at a state.
pub fn jacobian_singular_range<T: Real>(pencil: &QuadraticPencil<T>, state: &GaussNewtonState<T>) -> Result<(T, T)> {
    let s = svd(&jacobian(pencil, &state.u, &state.y, state.lambda, state.mu))?;
    Ok((s.sigma_min(), s.sigma_max()))
}

/// Start vectors for a suspected curve crossing, where `W(λ₀, μ₀)` has a
/// two-dimensional near-kernel. With `U = [v₁ v₂]`, `Y = [conj l₁, conj l₂]`
/// from the two smallest singular triplets and `B = Yᵀ(2λ₀L₂ + L₁)U`, returns
/// `u = v₁` and `y = Y b` with `bᵀ B e₁ = 0`, so the ZGV equation holds
/// exactly at the start.
pub fn initial_vectors_crossing<T: Real>(pencil: &QuadraticPencil<T>, lambda0: C<T>, mu0: C<T>) -> Result<(Vec<C<T>>, Vec<C<T>>)> {
    let n = pencil.n();
    if n < 2 {
        return initial_vectors(pencil, lambda0, mu0);
    }
    let w = pencil.eval_lambda_mu(lambda0, mu0);
    let t = smallest_singular_triplets(&w, 2)?;
    let ys: Vec<Vec<C<T>>> = t.iter().map(|s| s.u_left.iter().map(|v| v.conj()).collect()).collect();
    let du = pencil.d_lambda(lambda0).matvec(&t[0].v_right);
    let ba = [vdotu(&ys[0], &du), vdotu(&ys[1], &du)];
    let mut y: Vec<C<T>> = ys[0].iter().zip(&ys[1]).map(|(a, b)| *a * ba[1] - *b * ba[0]).collect();
    if crate::scalar::normalize(&mut y) == T::zero() {
        y = ys[0].clone();
    }
    Ok((t[0].v_right.clone(), y))
}

/// Refines an MFRD candidate `(λ₀, μ₀)`.
///
/// The singular-vector start of [`initial_vectors`] is tried first. When it
/// fails or converges to a point with `|k − k₀| > radius` or
/// `|ω − ω₀| > radius`, the iteration is repeated from
/// [`initial_vectors_crossing`]; the first result inside the radius wins,
/// otherwise any converged result is returned.
pub fn refine_candidate<T: Real>(
    pencil: &QuadraticPencil<T>,
    lambda0: C<T>,
    mu0: C<T>,
    tol: T,
    maxit: usize,
    radius: T,
) -> Result<GaussNewtonState<T>> {
    let k0 = lambda0.im;
    let w0 = mu0.sqrt().re.abs();
    let inside = |s: &GaussNewtonState<T>| (s.lambda.im - k0).abs() <= radius && (s.mu.sqrt().re.abs() - w0).abs() <= radius;
    let first = initial_vectors(pencil, lambda0, mu0).and_then(|(u, y)| gauss_newton(pencil, &u, &y, lambda0, mu0, tol, maxit));
    if let Ok(s) = &first {
        if inside(s) {
            return first;
        }
    }
    let second =
        initial_vectors_crossing(pencil, lambda0, mu0).and_then(|(u, y)| gauss_newton(pencil, &u, &y, lambda0, mu0, tol, maxit));
    match (first, second) {
        (_, Ok(s)) if inside(&s) => Ok(s),
        (Ok(f), _) => Ok(f),
        (Err(_), Ok(s)) => Ok(s),
        (Err(e), Err(_)) => Err(e),
    }
}
