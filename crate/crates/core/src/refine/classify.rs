use super::newton::GaussNewtonState;
use crate::dense::{eig_dense, eigvals, LuFactorization};
use crate::error::Result;
use crate::mfrd::QuadraticPencil;
use crate::scalar::{cim, cre, vdotu, Real, C};

/// Outcome of classifying a converged Gauss-Newton solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    Zgv,
    TrivialZgv,
    Crossing,
    Rejected,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Zgv => "zgv",
            Classification::TrivialZgv => "trivial_zgv",
            Classification::Crossing => "crossing",
            Classification::Rejected => "rejected",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A solution `(k, ω)` with its eigenvectors and classification.
#[derive(Debug, Clone)]
pub struct ZgvPoint<T: Real = f64> {
    pub k: T,
    pub omega: T,
    pub u: Vec<C<T>>,
    /// Left eigenvector.
    pub z: Vec<C<T>>,
    pub residual: T,
    pub classification: Classification,
    /// Distance from `ω` to the nearest other eigenvalue of the GEP at fixed `k`.
    pub omega_gap: T,
    pub lambda: C<T>,
    pub mu: C<T>,
}

/// Thresholds of [`classify`]; every test is relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions<T: Real = f64> {
    /// `|Re λ| ≤ tol_real · (1 + |λ|)`.
    pub tol_real: T,
    /// `|Im μ| ≤ tol_imag · (1 + |μ|)`.
    pub tol_imag: T,
    /// `|zᴴ(2λL₂ + L₁)u| ≤ tol_zgv · (‖L₁‖ + 2|λ|‖L₂‖)`.
    pub tol_zgv: T,
    /// `ω` is simple when every other GEP frequency is farther than `gap · (1 + ω)`.
    pub gap: T,
    /// Absolute `|k|` at or below which a point is trivial.
    pub k_zero: T,
}

impl<T: Real> Default for ClassifyOptions<T> {
    fn default() -> Self {
        Self {
            tol_real: T::lit(1e-6),
            tol_imag: T::lit(1e-6),
            tol_zgv: T::lit(1e-6),
            gap: T::lit(1e-6),
            k_zero: T::lit(1e-4),
        }
    }
}

impl<T: Real> ClassifyOptions<T> {
    /// Defaults with `k_zero = 1e-4 · (1 + k_b)` for a scan ending at `k_b`.
    pub fn for_interval(k_b: T) -> Self {
        Self {
            k_zero: T::lit(1e-4) * (T::one() + k_b.abs()),
            ..Self::default()
        }
    }
}

/// `W(k, 0) = −k²L₂ + ikL₁ + L₀`.
fn stiffness_at<T: Real>(pencil: &QuadraticPencil<T>, k: T) -> crate::dense::ComplexMatrix<T> {
    pencil.eval_lambda_mu(cim(k), C::new(T::zero(), T::zero()))
}

/// Eigenpairs `(ω², u)` of `(−k²L₂ + ikL₁ + L₀) u = −ω² M u`, sorted by
/// `Re ω²` ascending.
pub fn gep_omega<T: Real>(pencil: &QuadraticPencil<T>, k: T) -> Result<Vec<(C<T>, Vec<C<T>>)>> {
    let lu = LuFactorization::new(pencil.m())?;
    let a = lu.solve(&stiffness_at(pencil, k));
    let mut out: Vec<(C<T>, Vec<C<T>>)> = eig_dense(&a)?.into_iter().map(|e| (-e.value, e.vector)).collect();
    out.sort_by(|x, y| x.0.re.partial_cmp(&y.0.re).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

/// The `ω²` values of [`gep_omega`] without eigenvectors.
pub fn gep_omega_squared<T: Real>(pencil: &QuadraticPencil<T>, k: T) -> Result<Vec<C<T>>> {
    let lu = LuFactorization::new(pencil.m())?;
    let mut w2: Vec<C<T>> = eigvals(&lu.solve(&stiffness_at(pencil, k)))?.into_iter().map(|e| -e).collect();
    w2.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap_or(std::cmp::Ordering::Equal));
    Ok(w2)
}

/// Distance from `omega` to the nearest GEP frequency at `k` other than the
/// one closest to `omega` itself.
pub fn omega_gap<T: Real>(pencil: &QuadraticPencil<T>, k: T, omega: T) -> Result<T> {
    let freqs: Vec<T> = gep_omega_squared(pencil, k)?
        .into_iter()
        .map(|w2| (w2.sqrt() - cre(omega)).norm())
        .collect();
    let (self_idx, _) = freqs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
        .expect("nonempty spectrum");
    Ok(freqs
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != self_idx)
        .map(|(_, d)| *d)
        .fold(T::infinity(), T::min))
}

/// Classifies a converged state as ZGV, trivial, crossing or rejected.
pub fn classify<T: Real>(pencil: &QuadraticPencil<T>, state: &GaussNewtonState<T>, opts: &ClassifyOptions<T>) -> Result<ZgvPoint<T>> {
    let lambda = state.lambda;
    let mu = state.mu;
    let k = lambda.im;
    let root = mu.sqrt();
    let omega = root.re.abs();
    let real_ok = lambda.re.abs() <= opts.tol_real * (T::one() + lambda.norm())
        && mu.im.abs() <= opts.tol_imag * (T::one() + mu.norm());
    let [_, n1, n2, _] = pencil.norms();
    let d = pencil.d_lambda(lambda);
    let zgv_scalar = vdotu(&state.y, &d.matvec(&state.u)).norm();
    let zgv_ok = zgv_scalar <= opts.tol_zgv * (n1 + T::lit(2.0) * lambda.norm() * n2);
    let gap = omega_gap(pencil, k, omega)?;
    let classification = if k.abs() <= opts.k_zero {
        Classification::TrivialZgv
    } else if !(real_ok && zgv_ok) {
        Classification::Rejected
    } else if gap > opts.gap * (T::one() + omega) {
        Classification::Zgv
    } else {
        Classification::Crossing
    };
    Ok(ZgvPoint {
        k,
        omega,
        u: state.u.clone(),
        z: state.z(),
        residual: state.residual_norm,
        classification,
        omega_gap: gap,
        lambda,
        mu,
    })
}
