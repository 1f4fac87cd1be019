use crate::dense::{svd, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cim, Real, C};

/// Relative bound on `σ_min(M) / σ_max(M)` below which `M` counts as singular.
pub const MASS_SINGULAR_TOL: f64 = 1e-12;

/// The quadratic two-parameter pencil `W(k, ω) = (ik)² L₂ + ik L₁ + L₀ + ω² M`.
///
/// All four matrices are real, square and of equal size, and `M` is
/// nonsingular. They are stored promoted to complex.
#[derive(Debug, Clone)]
pub struct QuadraticPencil<T: Real = f64> {
    l0: ComplexMatrix<T>,
    l1: ComplexMatrix<T>,
    l2: ComplexMatrix<T>,
    m: ComplexMatrix<T>,
    norms: [T; 4],
}

impl<T: Real> QuadraticPencil<T> {
    pub fn new(
        l0: ComplexMatrix<T>,
        l1: ComplexMatrix<T>,
        l2: ComplexMatrix<T>,
        m: ComplexMatrix<T>,
    ) -> Result<Self> {
        let n = l0.rows();
        for (name, a) in [("L0", &l0), ("L1", &l1), ("L2", &l2), ("M", &m)] {
            if a.rows() != n || a.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    a.rows(),
                    a.cols()
                )));
            }
            if !a.is_finite() {
                return Err(Error::NonFinite(name.into()));
            }
            if !a.is_real() {
                return Err(Error::NonRealEntries(name.into()));
            }
        }
        if n == 0 {
            return Err(Error::DimensionMismatch("empty pencil".into()));
        }
        let s = svd(&m)?;
        if !(s.sigma_min() > T::lit(MASS_SINGULAR_TOL) * s.sigma_max()) {
            return Err(Error::SingularMass {
                sigma_min: s.sigma_min().as_f64(),
                norm: s.sigma_max().as_f64(),
            });
        }
        let norms = [l0.norm_fro(), l1.norm_fro(), l2.norm_fro(), m.norm_fro()];
        Ok(Self { l0, l1, l2, m, norms })
    }

    /// Pencil from real matrices given row by row.
    pub fn from_real_rows(l0: &[&[T]], l1: &[&[T]], l2: &[&[T]], m: &[&[T]]) -> Result<Self> {
        Self::new(
            ComplexMatrix::from_real_rows(l0),
            ComplexMatrix::from_real_rows(l1),
            ComplexMatrix::from_real_rows(l2),
            ComplexMatrix::from_real_rows(m),
        )
    }

    pub fn n(&self) -> usize {
        self.l0.rows()
    }

    pub fn l0(&self) -> &ComplexMatrix<T> {
        &self.l0
    }

    pub fn l1(&self) -> &ComplexMatrix<T> {
        &self.l1
    }

    pub fn l2(&self) -> &ComplexMatrix<T> {
        &self.l2
    }

    pub fn m(&self) -> &ComplexMatrix<T> {
        &self.m
    }

    /// Frobenius norms `[‖L₀‖, ‖L₁‖, ‖L₂‖, ‖M‖]`.
    pub fn norms(&self) -> [T; 4] {
        self.norms
    }

    /// `‖L₀‖ + ‖L₁‖ + ‖L₂‖ + ‖M‖`.
    pub fn scale(&self) -> T {
        self.norms.iter().copied().sum()
    }

    /// `λ² L₂ + λ L₁ + L₀ + μ M`.
    pub fn eval_lambda_mu(&self, lambda: C<T>, mu: C<T>) -> ComplexMatrix<T> {
        let mut w = self.l0.clone();
        w.add_scaled(lambda * lambda, &self.l2);
        w.add_scaled(lambda, &self.l1);
        w.add_scaled(mu, &self.m);
        w
    }

    /// `W(k, ω)`.
    pub fn eval(&self, k: C<T>, omega: C<T>) -> ComplexMatrix<T> {
        self.eval_lambda_mu(cim::<T>(T::one()) * k, omega * omega)
    }

    /// `2λ L₂ + L₁`, the λ-derivative of `W`.
    pub fn d_lambda(&self, lambda: C<T>) -> ComplexMatrix<T> {
        let mut d = self.l1.clone();
        d.add_scaled(lambda + lambda, &self.l2);
        d
    }
}
