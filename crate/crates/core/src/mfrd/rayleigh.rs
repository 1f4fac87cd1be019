use super::QuadraticPencil;
use crate::dense::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cre, vdot, vnorm, Real, C};

/// Relative size of `zᴴΔ₀z` below which the quotient is refused.
pub const DEGENERATE_TOL: f64 = 1e-10;

/// Scratch for the structured quotients: `T₁ = G₃z₁ + G₄z₂`,
/// `T₂ = G₄z₁ + G₅z₂`, `T₃ = G₁z₁ + G₂z₂`, `T₄ = G₂z₁` in matrix form.
#[derive(Debug, Clone)]
pub struct RayleighWorkspace<T: Real = f64> {
    pub t1: ComplexMatrix<T>,
    pub t2: ComplexMatrix<T>,
    pub t3: ComplexMatrix<T>,
    pub t4: ComplexMatrix<T>,
}

impl<T: Real> RayleighWorkspace<T> {
    pub fn new(n: usize) -> Self {
        Self {
            t1: ComplexMatrix::zeros(n, n),
            t2: ComplexMatrix::zeros(n, n),
            t3: ComplexMatrix::zeros(n, n),
            t4: ComplexMatrix::zeros(n, n),
        }
    }

    /// Fills `T₁..T₄` for `z = (vec Z₁; vec Z₂)`.
    pub fn fill(&mut self, pencil: &QuadraticPencil<T>, delta: T, z1: &ComplexMatrix<T>, z2: &ComplexMatrix<T>) {
        let s = T::one() + delta;
        let s2 = s * s;
        let (l0, l1, l2, m) = (pencil.l0(), pencil.l1(), pencil.l2(), pencil.m());
        let (l0t, l1t, l2t, mt) = (l0.transpose(), l1.transpose(), l2.transpose(), m.transpose());
        let prod = |a: &ComplexMatrix<T>, x: &ComplexMatrix<T>, bt: &ComplexMatrix<T>| a.matmul(x).matmul(bt);

        let mut t1 = -prod(l0, z1, &l1t);
        t1.add_scaled(cre(s), &prod(l1, z1, &l0t));
        t1.add_scaled(cre(s2), &prod(l2, z2, &l0t));
        t1.add_scaled(cre(-T::one()), &prod(l0, z2, &l2t));

        let mut t2 = prod(l2, z1, &l0t).scale_real(s2);
        t2.add_scaled(cre(-T::one()), &prod(l0, z1, &l2t));
        t2.add_scaled(cre(-s), &prod(l1, z2, &l2t));
        t2.add_scaled(cre(s2), &prod(l2, z2, &l1t));

        let mut t3 = prod(m, z1, &l1t);
        t3.add_scaled(cre(-s), &prod(l1, z1, &mt));
        t3.add_scaled(cre(T::one()), &prod(m, z2, &l2t));
        t3.add_scaled(cre(-s2), &prod(l2, z2, &mt));

        let mut t4 = prod(m, z1, &l2t);
        t4.add_scaled(cre(-s2), &prod(l2, z1, &mt));

        self.t1 = t1;
        self.t2 = t2;
        self.t3 = t3;
        self.t4 = t4;
    }
}

fn split<T: Real>(n: usize, z: &[C<T>]) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let nn = n * n;
    if z.len() != 2 * nn {
        return Err(Error::DimensionMismatch(format!(
            "MFRD vector has length {}, expected {}",
            z.len(),
            2 * nn
        )));
    }
    Ok((
        ComplexMatrix::from_col_major(n, n, z[..nn].to_vec())?,
        ComplexMatrix::from_col_major(n, n, z[nn..].to_vec())?,
    ))
}

/// `zᴴΔ₀z = z₁ᴴt₃ + z₂ᴴt₄`, checked against the degeneracy threshold.
fn denominator<T: Real>(
    pencil: &QuadraticPencil<T>,
    z: &[C<T>],
    z1: &ComplexMatrix<T>,
    z2: &ComplexMatrix<T>,
    ws: &RayleighWorkspace<T>,
) -> Result<C<T>> {
    let den = vdot(z1.as_slice(), ws.t3.as_slice()) + vdot(z2.as_slice(), ws.t4.as_slice());
    let [_, n1, n2, nm] = pencil.norms();
    let zn = vnorm(z);
    let threshold = T::lit(DEGENERATE_TOL) * zn * zn * (nm + n1 + n2);
    if !(den.norm() >= threshold) || den.norm() == T::zero() {
        return Err(Error::DegenerateQuotient {
            denominator: den.norm().as_f64(),
            threshold: threshold.as_f64(),
        });
    }
    Ok(den)
}

/// `μ = zᴴΔ_M z / zᴴΔ₀z` evaluated with `n × n` products only.
pub fn rayleigh_mu<T: Real>(pencil: &QuadraticPencil<T>, delta: T, z: &[C<T>]) -> Result<C<T>> {
    let mut ws = RayleighWorkspace::new(pencil.n());
    rayleigh_mu_with(pencil, delta, z, &mut ws)
}

/// [`rayleigh_mu`] with caller-owned scratch.
pub fn rayleigh_mu_with<T: Real>(
    pencil: &QuadraticPencil<T>,
    delta: T,
    z: &[C<T>],
    ws: &mut RayleighWorkspace<T>,
) -> Result<C<T>> {
    let (z1, z2) = split(pencil.n(), z)?;
    ws.fill(pencil, delta, &z1, &z2);
    let den = denominator(pencil, z, &z1, &z2, ws)?;
    let num = vdot(z1.as_slice(), ws.t1.as_slice()) + vdot(z2.as_slice(), ws.t2.as_slice());
    Ok(num / den)
}

/// `η = zᴴΔ_η z / zᴴΔ₀z` with `Δ_η = [[0, −G₀], [−G₀, −G₁]]`, the operator
/// determinant belonging to the `η` coordinate of the three-parameter problem.
/// At an exact eigenvector `η = λ²`.
pub fn rayleigh_eta<T: Real>(pencil: &QuadraticPencil<T>, delta: T, z: &[C<T>]) -> Result<C<T>> {
    let (z1, z2) = split(pencil.n(), z)?;
    let mut ws = RayleighWorkspace::new(pencil.n());
    ws.fill(pencil, delta, &z1, &z2);
    let den = denominator(pencil, z, &z1, &z2, &ws)?;
    let s = T::one() + delta;
    let (l0, l1, m) = (pencil.l0(), pencil.l1(), pencil.m());
    let (l0t, l1t, mt) = (l0.transpose(), l1.transpose(), m.transpose());
    // G₀ vec X = vec(M X L₀ᵀ − L₀ X Mᵀ), G₁ vec X = vec(M X L₁ᵀ − s L₁ X Mᵀ)
    let g0 = |x: &ComplexMatrix<T>| &m.matmul(x).matmul(&l0t) - &l0.matmul(x).matmul(&mt);
    let g1 = |x: &ComplexMatrix<T>| {
        let mut r = m.matmul(x).matmul(&l1t);
        r.add_scaled(cre(-s), &l1.matmul(x).matmul(&mt));
        r
    };
    let top = -g0(&z2);
    let mut bottom = -g0(&z1);
    bottom.add_scaled(cre(-T::one()), &g1(&z2));
    let num = vdot(z1.as_slice(), top.as_slice()) + vdot(z2.as_slice(), bottom.as_slice());
    Ok(num / den)
}
