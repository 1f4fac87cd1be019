//! Spectral-element assembly of the plate waveguide pencil.
//!
//! With `u(x, y) = û(y) e^{ikx}` and no variation along `z`, the weak form of
//! `∇·(c : ∇u) + ρω²u = 0` with traction-free faces reads
//!
//! ```text
//! (ik)² ∫ vᵀ c_xx û + ik ∫ (vᵀ c_xy û′ − v′ᵀ c_yx û) − ∫ v′ᵀ c_yy û′ + ω² ∫ ρ vᵀ û = 0,
//! ```
//!
//! where `(c_ij)_ab = c_{aibj}`. The boundary term of the integration by
//! parts is the traction `c_yx ik û + c_yy û′`, so free faces need no extra
//! rows. Because `c_xyᵀ = c_yx` the `ik` block is skew-symmetric and `W` is
//! Hermitian for real `(k, ω)`. Integrals use the GLL rule of each element,
//! which makes `L₂` and `M` block diagonal.

use super::gll::GllRule;
use super::material::PlateMaterial;
use crate::dense::ComplexMatrix;
use crate::error::{Error, Result};
use crate::mfrd::QuadraticPencil;
use crate::scalar::{Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    /// Lamb waves: displacements `(u_x, u_y)`.
    InPlane,
    /// Coupled Lamb and shear-horizontal waves: `(u_x, u_y, u_z)`.
    Full,
}

impl Polarization {
    pub fn components(self) -> usize {
        match self {
            Polarization::InPlane => 2,
            Polarization::Full => 3,
        }
    }
}

/// Face conditions at `y = 0` and `y = h`, in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    FreeFree,
    ClampedFree,
    ClampedClamped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discretization {
    pub order: usize,
    pub elements: usize,
    pub polarization: Polarization,
    pub bc: BoundaryCondition,
}

impl Discretization {
    pub fn new(order: usize, elements: usize, polarization: Polarization, bc: BoundaryCondition) -> Result<Self> {
        let d = Self {
            order,
            elements,
            polarization,
            bc,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.elements == 0 {
            return Err(Error::InvalidConfig(format!(
                "discretization needs order >= 1 and elements >= 1, got order {} with {} elements",
                self.order, self.elements
            )));
        }
        if self.bc == BoundaryCondition::ClampedClamped && self.order * self.elements < 2 {
            return Err(Error::InvalidConfig("clamped faces leave no free nodes".into()));
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.order * self.elements + 1
    }

    fn clamped_nodes(&self) -> Vec<usize> {
        match self.bc {
            BoundaryCondition::FreeFree => vec![],
            BoundaryCondition::ClampedFree => vec![0],
            BoundaryCondition::ClampedClamped => vec![0, self.nodes() - 1],
        }
    }

    /// Pencil dimension after boundary elimination.
    pub fn dofs(&self) -> usize {
        (self.nodes() - self.clamped_nodes().len()) * self.polarization.components()
    }
}

/// Assembles `(L₀, L₁, L₂, M)` for the plate. Degrees of freedom are ordered
/// node-major, then by displacement component.
pub fn assemble_plate<T: Real>(mat: &PlateMaterial<T>, disc: &Discretization) -> Result<QuadraticPencil<T>> {
    disc.validate()?;
    // re-validates materials built by struct literal
    let mat = PlateMaterial::new(mat.rho, mat.c, mat.h)?;
    let rule = GllRule::<T>::new(disc.order)?;
    let nc = disc.polarization.components();
    let nn = disc.nodes();
    let nf = nn * nc;
    let block = |i: usize, j: usize| -> [[T; 3]; 3] {
        let mut b = [[T::zero(); 3]; 3];
        for (a, row) in b.iter_mut().enumerate().take(nc) {
            for (bb, v) in row.iter_mut().enumerate().take(nc) {
                *v = mat.tensor(a, i, bb, j);
            }
        }
        b
    };
    let (cxx, cxy, cyx, cyy) = (block(0, 0), block(0, 1), block(1, 0), block(1, 1));
    let mut l0 = vec![T::zero(); nf * nf];
    let mut l1 = vec![T::zero(); nf * nf];
    let mut l2 = vec![T::zero(); nf * nf];
    let mut m = vec![T::zero(); nf * nf];
    let idx = |node: usize, comp: usize| node * nc + comp;
    let jac = mat.h / T::lit(2.0 * disc.elements as f64);
    let p = disc.order;
    for e in 0..disc.elements {
        let g = |local: usize| e * p + local;
        for i in 0..=p {
            let wi = rule.weights[i];
            for a in 0..nc {
                m[idx(g(i), a) * nf + idx(g(i), a)] += mat.rho * wi * jac;
                for b in 0..nc {
                    l2[idx(g(i), a) * nf + idx(g(i), b)] += wi * jac * cxx[a][b];
                }
            }
            for j in 0..=p {
                let wj = rule.weights[j];
                let mut stiff = T::zero();
                for q in 0..=p {
                    stiff += rule.weights[q] * rule.d[q][i] * rule.d[q][j];
                }
                for a in 0..nc {
                    for b in 0..nc {
                        let r = idx(g(i), a) * nf + idx(g(j), b);
                        l1[r] += wi * rule.d[i][j] * cxy[a][b] - wj * rule.d[j][i] * cyx[a][b];
                        l0[r] -= stiff / jac * cyy[a][b];
                    }
                }
            }
        }
    }
    let clamped = disc.clamped_nodes();
    let keep: Vec<usize> = (0..nf).filter(|&d| !clamped.contains(&(d / nc))).collect();
    let reduce = |full: &[T]| ComplexMatrix::from_fn(keep.len(), keep.len(), |i, j| C::new(full[keep[i] * nf + keep[j]], T::zero()));
    QuadraticPencil::new(reduce(&l0), reduce(&l1), reduce(&l2), reduce(&m))
}
