//! Refinement and classification of ZGV candidates.

mod classify;
mod newton;

pub use classify::{classify, gep_omega, gep_omega_squared, omega_gap, Classification, ClassifyOptions, ZgvPoint};
pub use newton::{
    default_tol, evaluate_w, gauss_newton, gauss_newton_step, initial_vectors, initial_vectors_crossing, jacobian, jacobian_singular_range, refine_candidate,
    residual, GaussNewtonState, DEFAULT_MAXIT, MAX_HALVINGS,
};
