//! Structured solves with `Δ₁ − σΔ₀` that never form the `2n² × 2n²` matrices.
//!
//! With `z = (vec Z₁; vec Z₂)`, `y = (vec Y₁; vec Y₂)` and `s = 1 + δ`, the
//! first block row of `(Δ₁ − σΔ₀) z = Δ₀ y` reads
//!
//! ```text
//! M Z₁ L(0)ᵀ − L(δ) Z₁ Mᵀ = W,
//! W = −M Y₁ (L₁ + σL₂)ᵀ + (sL₁ + σs²L₂) Y₁ Mᵀ − M Y₂ L₂ᵀ + s² L₂ Y₂ Mᵀ,
//! L(δ) = L₀ + sσ L₁ + s²σ² L₂,
//! ```
//!
//! and the second gives `Z₂ = Y₁ + σ Z₁`. Multiplying by `M⁻¹` on the left and
//! `M⁻ᵀ` on the right turns the first row into the Sylvester equation
//! `(−M⁻¹L(δ)) Z₁ + Z₁ (L(0)ᵀM⁻ᵀ) = M⁻¹ W M⁻ᵀ`.

use super::QuadraticPencil;
use crate::dense::{schur, ComplexMatrix, LuFactorization, SchurFactorization, SylvesterSolver};
use crate::error::{Error, Result};
use crate::scalar::{cone, cre, Real, C};

/// Everything needed to apply `(Δ₁ − σΔ₀)⁻¹Δ₀` in `O(n³)` at a fixed `(σ, δ)`.
///
/// Immutable after construction; `apply` only reads it, so one cache can
/// serve concurrent callers.
#[derive(Debug, Clone)]
pub struct ShiftInvertCache<'a, T: Real = f64> {
    pencil: &'a QuadraticPencil<T>,
    sigma: C<T>,
    delta: T,
    m_factor: LuFactorization<T>,
    schur_left: SchurFactorization<T>,
    schur_right: SchurFactorization<T>,
    solver: SylvesterSolver<T>,
    // σ-dependent combinations reused by every apply
    l1_sigma_l2_t: ComplexMatrix<T>,
    sl1_sigma_l2: ComplexMatrix<T>,
    s2_l2: ComplexMatrix<T>,
    l2_t: ComplexMatrix<T>,
    m_t: ComplexMatrix<T>,
}

impl<'a, T: Real> ShiftInvertCache<'a, T> {
    pub fn new(pencil: &'a QuadraticPencil<T>, sigma: C<T>, delta: T) -> Result<Self> {
        if !(delta > T::zero()) || !delta.is_finite() {
            return Err(Error::InvalidConfig(format!("MFRD delta must be positive, got {delta}")));
        }
        if !(sigma.re.is_finite() && sigma.im.is_finite()) {
            return Err(Error::NonFinite("shift".into()));
        }
        let m_factor = LuFactorization::new(pencil.m()).map_err(|_| {
            let s = crate::dense::svd(pencil.m()).ok();
            Error::SingularMass {
                sigma_min: s.as_ref().map_or(0.0, |s| s.sigma_min().as_f64()),
                norm: pencil.norms()[3].as_f64(),
            }
        })?;
        let l_delta = l_of(pencil, sigma, delta);
        let l_zero = l_of(pencil, sigma, T::zero());
        let schur_left = schur(&m_factor.solve(&l_delta))?;
        let schur_right = schur(&m_factor.solve_right_transpose(&l_zero.transpose()))?;
        let neg_left = SchurFactorization {
            q: schur_left.q.clone(),
            r: -schur_left.r.clone(),
        };
        let solver = SylvesterSolver::from_schur(neg_left, schur_right.clone()).map_err(|e| match e {
            Error::SingularSylvester { .. } => Error::EigenvalueCollision {
                sigma_re: sigma.re.as_f64(),
                sigma_im: sigma.im.as_f64(),
            },
            other => other,
        })?;
        let s = T::one() + delta;
        let mut l1_sigma_l2 = pencil.l1().clone();
        l1_sigma_l2.add_scaled(sigma, pencil.l2());
        let mut sl1_sigma_l2 = pencil.l1().scale_real(s);
        sl1_sigma_l2.add_scaled(sigma * cre(s * s), pencil.l2());
        Ok(Self {
            pencil,
            sigma,
            delta,
            m_factor,
            schur_left,
            schur_right,
            solver,
            l1_sigma_l2_t: l1_sigma_l2.transpose(),
            sl1_sigma_l2,
            s2_l2: pencil.l2().scale_real(s * s),
            l2_t: pencil.l2().transpose(),
            m_t: pencil.m().transpose(),
        })
    }

    pub fn pencil(&self) -> &'a QuadraticPencil<T> {
        self.pencil
    }

    pub fn sigma(&self) -> C<T> {
        self.sigma
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// Schur form of `M⁻¹L(δ)`.
    pub fn schur_left(&self) -> &SchurFactorization<T> {
        &self.schur_left
    }

    /// Schur form of `L(0)ᵀM⁻ᵀ`.
    pub fn schur_right(&self) -> &SchurFactorization<T> {
        &self.schur_right
    }

    pub fn m_factor(&self) -> &LuFactorization<T> {
        &self.m_factor
    }

    /// `L(δ)` rebuilt from the pencil.
    pub fn l_delta(&self) -> ComplexMatrix<T> {
        l_of(self.pencil, self.sigma, self.delta)
    }

    /// Length of the vectors the operator acts on, `2n²`.
    pub fn dim(&self) -> usize {
        2 * self.pencil.n() * self.pencil.n()
    }

    /// `z = (Δ₁ − σΔ₀)⁻¹ Δ₀ y`.
    pub fn apply(&self, y: &[C<T>]) -> Vec<C<T>> {
        let n = self.pencil.n();
        let nn = n * n;
        assert_eq!(y.len(), 2 * nn, "shift-invert input length");
        let y1 = ComplexMatrix::from_col_major(n, n, y[..nn].to_vec()).expect("block shape");
        let y2 = ComplexMatrix::from_col_major(n, n, y[nn..].to_vec()).expect("block shape");
        let m = self.pencil.m();

        // eight n×n products, one pair per term of W
        let mut w = -m.matmul(&y1).matmul(&self.l1_sigma_l2_t);
        w.add_scaled(cone(), &self.sl1_sigma_l2.matmul(&y1).matmul(&self.m_t));
        w.add_scaled(-cone::<T>(), &m.matmul(&y2).matmul(&self.l2_t));
        w.add_scaled(cone(), &self.s2_l2.matmul(&y2).matmul(&self.m_t));

        let w_tilde = self.m_factor.solve_right_transpose(&self.m_factor.solve(&w));
        let z1 = self.solver.solve(&w_tilde);

        let mut z = Vec::with_capacity(2 * nn);
        z.extend_from_slice(z1.as_slice());
        z.extend(
            y1.as_slice()
                .iter()
                .zip(z1.as_slice())
                .map(|(&a, &b)| a + self.sigma * b),
        );
        z
    }
}

/// `L₀ + sσL₁ + s²σ²L₂` with `s = 1 + δ`.
fn l_of<T: Real>(p: &QuadraticPencil<T>, sigma: C<T>, delta: T) -> ComplexMatrix<T> {
    let ss = sigma * cre(T::one() + delta);
    let mut l = p.l0().clone();
    l.add_scaled(ss, p.l1());
    l.add_scaled(ss * ss, p.l2());
    l
}

/// Builds the shift-invert cache at `(σ, δ)`.
pub fn build_cache<T: Real>(
    pencil: &QuadraticPencil<T>,
    sigma: C<T>,
    delta: T,
) -> Result<ShiftInvertCache<'_, T>> {
    ShiftInvertCache::new(pencil, sigma, delta)
}

/// `(Δ₁ − σΔ₀)⁻¹ Δ₀ y` through the cached Sylvester reduction.
pub fn apply_shift_invert<T: Real>(cache: &ShiftInvertCache<'_, T>, y: &[C<T>]) -> Result<Vec<C<T>>> {
    if y.len() != cache.dim() {
        return Err(Error::DimensionMismatch(format!(
            "shift-invert input has length {}, expected {}",
            y.len(),
            cache.dim()
        )));
    }
    Ok(cache.apply(y))
}
