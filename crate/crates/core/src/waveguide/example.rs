use crate::mfrd::QuadraticPencil;
use crate::scalar::Real;

/// Printed four-digit reference values of the 3×3 test pencil.
pub mod golden {
    /// Nontrivial ZGV point `(k, ω)`; its mirror `(−k, ω)` is also one.
    pub const ZGV: (&str, &str) = ("1.0642", "0.2393");
    /// Frequencies of the trivial ZGV points at `k = 0`.
    pub const TRIVIAL_OMEGA: [&str; 3] = ["0.2673", "0.4074", "1.0628"];
    /// Crossing of two dispersion curves, not a ZGV point.
    pub const CROSSING: (&str, &str) = ("0.4236", "0.3503");

    pub fn parse(s: &str) -> f64 {
        s.parse().expect("golden constant")
    }
}

/// The 3×3 pencil with `L₀` symmetric, `L₁` skew-symmetric and `L₂`, `M`
/// symmetric positive definite, whose dispersion curves have one ZGV pair
/// `(±1.0642, 0.2393)`, three trivial ZGV points at `k = 0` and a crossing
/// at `(±0.4236, 0.3503)`.
pub fn example21<T: Real>() -> QuadraticPencil<T> {
    let f = T::lit;
    let z = T::zero();
    QuadraticPencil::from_real_rows(
        &[&[f(-1.75), f(1.0), z], &[f(1.0), f(-1.75), z], &[z, z, f(-0.25)]],
        &[&[z, f(3.0), z], &[f(-3.0), z, z], &[z, z, z]],
        &[&[f(2.0), f(1.0), z], &[f(1.0), f(1.0), z], &[z, z, f(1.0)]],
        &[&[f(3.0), f(1.0), z], &[f(1.0), f(4.0), z], &[z, z, f(3.5)]],
    )
    .expect("fixed pencil is valid")
}
