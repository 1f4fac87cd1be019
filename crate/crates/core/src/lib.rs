//! Zero-group-velocity (ZGV) points of parameter-dependent quadratic
//! eigenvalue problems
//!
//! ```text
//! W(k, ω) u = ((ik)² L₂ + ik L₁ + L₀ + ω² M) u = 0.
//! ```
//!
//! The scanner computes candidates from the method of fixed relative distance
//! (a regular three-parameter eigenvalue problem) with a shift-invert Arnoldi
//! solver whose linear solves reduce to `n × n` Sylvester equations, and then
//! refines each candidate with Gauss-Newton on an overdetermined zero-residual
//! system.
//!
//! Every numerical type is generic over the real field `T: Real` (`f64` or
//! `f32`); the aliases at the crate root fix `T = f64`, which is what the
//! scanner's tolerances are calibrated for.

pub mod arnoldi;
pub mod dense;
pub mod error;
pub mod mfrd;
pub mod refine;
pub mod scalar;
pub mod scanner;
pub mod waveguide;

pub use error::{Error, Result};
pub use scalar::{Real, C};

/// Double-precision complex matrix.
pub type Matrix64 = dense::ComplexMatrix<f64>;
/// Single-precision complex matrix.
pub type Matrix32 = dense::ComplexMatrix<f32>;
pub type Schur64 = dense::SchurFactorization<f64>;
pub type Pencil64 = mfrd::QuadraticPencil<f64>;
pub type Pencil32 = mfrd::QuadraticPencil<f32>;
pub type ShiftInvertCache64<'a> = mfrd::ShiftInvertCache<'a, f64>;
pub type DeltaOracle64 = mfrd::StructuredDeltaOracle<f64>;
pub type RitzPair64 = arnoldi::RitzPair<f64>;
pub type GaussNewtonState64 = refine::GaussNewtonState<f64>;
pub type ZgvPoint64 = refine::ZgvPoint<f64>;
pub type ScanConfig64 = scanner::ScanConfig<f64>;
pub type ScanReport64 = scanner::ScanReport<f64>;
pub type PlateMaterial64 = waveguide::PlateMaterial<f64>;
