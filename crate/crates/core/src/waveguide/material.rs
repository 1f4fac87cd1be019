use crate::error::{Error, Result};
use crate::scalar::Real;

/// Homogeneous elastic plate: density, Voigt stiffness and thickness.
///
/// Axes: `x` is the propagation direction, `y` the thickness direction and
/// `z` the invariant in-plane direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateMaterial<T: Real = f64> {
    pub rho: T,
    /// Voigt order `xx, yy, zz, yz, xz, xy`.
    pub c: [[T; 6]; 6],
    pub h: T,
}

/// Voigt index of the symmetric tensor index pair `(i, j)`.
pub fn voigt(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (1, 2) => 3,
        (0, 2) => 4,
        (0, 1) => 5,
        _ => panic!("tensor index out of range"),
    }
}

impl<T: Real> PlateMaterial<T> {
    /// Validates `rho > 0`, `h > 0` and that `c` is symmetric positive definite.
    pub fn new(rho: T, c: [[T; 6]; 6], h: T) -> Result<Self> {
        if !(rho > T::zero() && rho.is_finite()) {
            return Err(Error::InvalidMaterial(format!("density {rho} must be positive")));
        }
        if !(h > T::zero() && h.is_finite()) {
            return Err(Error::InvalidMaterial(format!("thickness {h} must be positive")));
        }
        let cmax = c.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs()));
        for i in 0..6 {
            for j in 0..6 {
                if !c[i][j].is_finite() {
                    return Err(Error::InvalidMaterial("non-finite stiffness".into()));
                }
                if (c[i][j] - c[j][i]).abs() > T::lit(1e-12) * cmax {
                    return Err(Error::InvalidMaterial(format!("stiffness not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        if !is_spd(&c) {
            return Err(Error::InvalidMaterial("stiffness is not positive definite".into()));
        }
        Ok(Self { rho, c, h })
    }

    /// Isotropic material from shear and longitudinal wave speeds.
    pub fn isotropic(ct: T, cl: T, rho: T, h: T) -> Result<Self> {
        let mu = rho * ct * ct;
        let lam = rho * cl * cl - T::lit(2.0) * mu;
        let mut c = [[T::zero(); 6]; 6];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = lam;
            }
            c[i][i] = lam + T::lit(2.0) * mu;
            c[i + 3][i + 3] = mu;
        }
        Self::new(rho, c, h)
    }

    /// Tensor entry `c_{ijkl}`.
    pub fn tensor(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        self.c[voigt(i, j)][voigt(k, l)]
    }

    /// Shear speed `sqrt(c_66 / ρ)` used as the velocity unit.
    pub fn reference_speed(&self) -> T {
        (self.c[5][5] / self.rho).sqrt()
    }

    /// Material with `ρ = 1`, `h = 1` and `c` divided by `ρ c_ref²`.
    ///
    /// Wavenumbers of the scaled plate are `k·h` and frequencies are
    /// `ω·h / c_ref` of the original one.
    pub fn nondimensional(&self) -> Self {
        let s = self.rho * self.reference_speed().powi(2);
        let mut c = self.c;
        for v in c.iter_mut().flatten() {
            *v = *v / s;
        }
        Self { rho: T::one(), c, h: T::one() }
    }
}

fn is_spd<T: Real>(c: &[[T; 6]; 6]) -> bool {
    let mut l = [[T::zero(); 6]; 6];
    let tol = T::epsilon() * T::lit(64.0) * (0..6).fold(T::zero(), |m, i| m.max(c[i][i].abs()));
    for j in 0..6 {
        let mut d = c[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > tol) {
            return false;
        }
        l[j][j] = d.sqrt();
        for i in (j + 1)..6 {
            let mut s = c[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / l[j][j];
        }
    }
    true
}
