//! Structured machinery for the fixed-relative-distance three-parameter
//! problem
//!
//! ```text
//! (η C₂ + λ C₁ + C₀) w = 0,
//! (η L₂ + λ L₁ + L₀ + μ M) u = 0,
//! (η s² L₂ + λ s L₁ + L₀ + μ M) v = 0,      s = 1 + δ,
//! ```
//!
//! whose operator determinants have the block form
//! `Δ₀ = [[G₁, G₂], [G₂, 0]]`, `Δ₁ = [[−G₀, 0], [0, G₂]]`,
//! `Δ_M = [[G₃, G₄], [G₄, G₅]]` with
//!
//! ```text
//! G₀ = L₀⊗M − M⊗L₀          G₃ = s L₀⊗L₁ − L₁⊗L₀
//! G₁ = L₁⊗M − s M⊗L₁        G₄ = s² L₀⊗L₂ − L₂⊗L₀
//! G₂ = L₂⊗M − s² M⊗L₂       G₅ = s² L₁⊗L₂ − s L₂⊗L₁
//! ```
//!
//! and `(A⊗B) vec X = vec(B X Aᵀ)` for column-major `vec`.

mod cache;
mod oracle;
mod pencil;
mod rayleigh;

pub use cache::{apply_shift_invert, build_cache, ShiftInvertCache};
pub use oracle::{
    build_explicit_deltas, build_explicit_deltas_capped, c0, c1, c2, operator_determinant3,
    StructuredDeltaOracle, ORACLE_CAP,
};
pub use pencil::{QuadraticPencil, MASS_SINGULAR_TOL};
pub use rayleigh::{rayleigh_eta, rayleigh_mu, rayleigh_mu_with, RayleighWorkspace, DEGENERATE_TOL};
