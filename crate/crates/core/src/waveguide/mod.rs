//! Test-problem generators: the 3×3 reference pencil, a spectral-element
//! elastic plate, dispersion sweeps and a brute-force ZGV oracle.

mod dispersion;
mod example;
mod gll;
mod material;
mod plate;

pub use dispersion::{dispersion_sweep, frequencies, linspace, zgv_oracle, zgv_oracle_with, DispersionGrid, OracleOptions};
pub use example::{example21, golden};
pub use gll::GllRule;
pub use material::{voigt, PlateMaterial};
pub use plate::{assemble_plate, BoundaryCondition, Discretization, Polarization};

/// Shear speed, longitudinal speed and density of the steel used for the
/// plate validation cases (SI units).
pub const STEEL: (f64, f64, f64) = (3200.0, 5900.0, 7900.0);
