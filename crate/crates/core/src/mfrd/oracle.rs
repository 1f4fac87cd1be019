//! Explicitly assembled `2n² × 2n²` operator determinants, for small `n` only.

use super::QuadraticPencil;
use crate::dense::{eig_dense, kron, ComplexMatrix, EigenPair, LuFactorization};
use crate::error::{Error, Result};
use crate::scalar::{cre, vdot, Real, C};

/// Largest `n` accepted by [`build_explicit_deltas`] by default.
pub const ORACLE_CAP: usize = 12;

/// `C₂ = [[1, 0], [0, 0]]`.
pub fn c2<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[&[T::one(), T::zero()], &[T::zero(), T::zero()]])
}

/// `C₁ = [[0, −1], [−1, 0]]`.
pub fn c1<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[&[T::zero(), -T::one()], &[-T::one(), T::zero()]])
}

/// `C₀ = [[0, 0], [0, 1]]`; `det(ηC₂ + λC₁ + C₀) = η − λ²`.
pub fn c0<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[&[T::zero(), T::zero()], &[T::zero(), T::one()]])
}

/// Operator determinant of a 3×3 array of matrices,
/// `Σ_{π ∈ S₃} sgn(π) A₁π₁ ⊗ A₂π₂ ⊗ A₃π₃`.
pub fn operator_determinant3<T: Real>(a: [[&ComplexMatrix<T>; 3]; 3]) -> ComplexMatrix<T> {
    const PERMS: [([usize; 3], i8); 6] = [
        ([0, 1, 2], 1),
        ([0, 2, 1], -1),
        ([1, 0, 2], -1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([2, 1, 0], -1),
    ];
    let rows = a[0][0].rows() * a[1][0].rows() * a[2][0].rows();
    let mut out = ComplexMatrix::zeros(rows, rows);
    for (p, sign) in PERMS {
        let term = kron(&kron(a[0][p[0]], a[1][p[1]]), a[2][p[2]]);
        out.add_scaled(cre(T::lit(sign as f64)), &term);
    }
    out
}

/// `Δ₀`, `Δ₁`, `Δ_M`, `Δ_η` and the Kronecker blocks `G₀..G₅`.
#[derive(Debug, Clone)]
pub struct StructuredDeltaOracle<T: Real = f64> {
    pub n: usize,
    pub delta: T,
    pub delta0: ComplexMatrix<T>,
    pub delta1: ComplexMatrix<T>,
    pub delta_m: ComplexMatrix<T>,
    pub delta_eta: ComplexMatrix<T>,
    pub g: [ComplexMatrix<T>; 6],
    /// Largest entrywise difference between the determinant expansion and the
    /// block assembly, over `Δ₀`, `Δ₁`, `Δ_M`, `Δ_η`.
    pub assembly_discrepancy: T,
}

fn blocks<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, c: &ComplexMatrix<T>, d: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let nn = a.rows();
    let mut out = ComplexMatrix::zeros(2 * nn, 2 * nn);
    out.set_block(0, 0, a);
    out.set_block(0, nn, b);
    out.set_block(nn, 0, c);
    out.set_block(nn, nn, d);
    out
}

/// Assembles the explicit oracle with the default cap.
pub fn build_explicit_deltas<T: Real>(pencil: &QuadraticPencil<T>, delta: T) -> Result<StructuredDeltaOracle<T>> {
    build_explicit_deltas_capped(pencil, delta, ORACLE_CAP)
}

pub fn build_explicit_deltas_capped<T: Real>(
    pencil: &QuadraticPencil<T>,
    delta: T,
    cap: usize,
) -> Result<StructuredDeltaOracle<T>> {
    let n = pencil.n();
    if n > cap {
        return Err(Error::OracleTooLarge { n, cap });
    }
    if !(delta >= T::zero()) {
        return Err(Error::InvalidConfig(format!("oracle delta must be nonnegative, got {delta}")));
    }
    let s = T::one() + delta;
    let (l0, l1, l2, m) = (pencil.l0(), pencil.l1(), pencil.l2(), pencil.m());
    let sl1 = l1.scale_real(s);
    let s2l2 = l2.scale_real(s * s);
    let zero = ComplexMatrix::zeros(2, 2);
    let (cc0, cc1, cc2) = (c0::<T>(), c1::<T>(), c2::<T>());

    // (a) operator-determinant expansion
    let e0 = operator_determinant3([[&cc2, &cc1, &zero], [l2, l1, m], [&s2l2, &sl1, m]]);
    let e1 = -operator_determinant3([[&cc2, &cc0, &zero], [l2, l0, m], [&s2l2, l0, m]]);
    let em = -operator_determinant3([[&cc2, &cc1, &cc0], [l2, l1, l0], [&s2l2, &sl1, l0]]);
    let eeta = -operator_determinant3([[&cc0, &cc1, &zero], [l0, l1, m], [l0, &sl1, m]]);

    // (b) block formulas
    let kr = |a: &ComplexMatrix<T>, b: &ComplexMatrix<T>| kron(a, b);
    let g0 = &kr(l0, m) - &kr(m, l0);
    let g1 = &kr(l1, m) - &kr(m, l1).scale_real(s);
    let g2 = &kr(l2, m) - &kr(m, l2).scale_real(s * s);
    let g3 = &kr(l0, l1).scale_real(s) - &kr(l1, l0);
    let g4 = &kr(l0, l2).scale_real(s * s) - &kr(l2, l0);
    let g5 = &kr(l1, l2).scale_real(s * s) - &kr(l2, l1).scale_real(s);
    let nn = n * n;
    let z = ComplexMatrix::zeros(nn, nn);
    let d0 = blocks(&g1, &g2, &g2, &z);
    let d1 = blocks(&-g0.clone(), &z, &z, &g2);
    let dm = blocks(&g3, &g4, &g4, &g5);
    let deta = blocks(&z, &-g0.clone(), &-g0.clone(), &-g1.clone());

    let assembly_discrepancy = [(&e0, &d0), (&e1, &d1), (&em, &dm), (&eeta, &deta)]
        .iter()
        .map(|(a, b)| (*a - *b).max_abs())
        .fold(T::zero(), T::max);

    Ok(StructuredDeltaOracle {
        n,
        delta,
        delta0: d0,
        delta1: d1,
        delta_m: dm,
        delta_eta: deta,
        g: [g0, g1, g2, g3, g4, g5],
        assembly_discrepancy,
    })
}

impl<T: Real> StructuredDeltaOracle<T> {
    /// Dense solve of `(Δ₁ − σΔ₀) z = Δ₀ y`.
    pub fn shift_invert_solve(&self, sigma: C<T>, y: &[C<T>]) -> Result<Vec<C<T>>> {
        let mut a = self.delta1.clone();
        a.add_scaled(-sigma, &self.delta0);
        let mut z = self.delta0.matvec(y);
        LuFactorization::new(&a)?.solve_vec(&mut z);
        Ok(z)
    }

    /// `‖(Δ₁ − σΔ₀) z − Δ₀ y‖ / ‖Δ₀ y‖`.
    pub fn shift_invert_residual(&self, sigma: C<T>, y: &[C<T>], z: &[C<T>]) -> T {
        let rhs = self.delta0.matvec(y);
        let lhs: Vec<C<T>> = self
            .delta1
            .matvec(z)
            .iter()
            .zip(self.delta0.matvec(z))
            .map(|(a, b)| a - sigma * b)
            .collect();
        let diff: Vec<C<T>> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        crate::scalar::vnorm(&diff) / crate::scalar::vnorm(&rhs)
    }

    /// `zᴴΔ_M z / zᴴΔ₀z`.
    pub fn rayleigh_mu(&self, z: &[C<T>]) -> C<T> {
        vdot(z, &self.delta_m.matvec(z)) / vdot(z, &self.delta0.matvec(z))
    }

    /// `zᴴΔ_η z / zᴴΔ₀z`.
    pub fn rayleigh_eta(&self, z: &[C<T>]) -> C<T> {
        vdot(z, &self.delta_eta.matvec(z)) / vdot(z, &self.delta0.matvec(z))
    }

    /// All eigenpairs of `Δ₁ z = λ Δ₀ z`, from `Δ₀⁻¹Δ₁`.
    pub fn eigenpairs(&self) -> Result<Vec<EigenPair<T>>> {
        let lu = LuFactorization::new(&self.delta0)?;
        eig_dense(&lu.solve(&self.delta1))
    }

    /// Eigenvalues of `Δ₁ z = λ Δ₀ z` as `σ + 1/ν` with `ν` the spectrum of
    /// `(Δ₁ − σΔ₀)⁻¹Δ₀`, sorted by distance to `σ`. Eigenvalues near `σ` are
    /// resolved far more accurately than through `Δ₀⁻¹Δ₁` when `Δ₀` is badly
    /// conditioned. Zero `ν` (infinite `λ`) are dropped.
    pub fn eigenvalues_near(&self, sigma: C<T>) -> Result<Vec<C<T>>> {
        let mut a = self.delta1.clone();
        a.add_scaled(-sigma, &self.delta0);
        let s = LuFactorization::new(&a)?.solve(&self.delta0);
        let mut out: Vec<C<T>> = eig_dense(&s)?
            .into_iter()
            .filter(|e| e.value.norm() > T::zero())
            .map(|e| sigma + e.value.inv())
            .collect();
        out.sort_by(|a, b| (a - sigma).norm().partial_cmp(&(b - sigma).norm()).unwrap_or(std::cmp::Ordering::Equal));
        Ok(out)
    }
}
