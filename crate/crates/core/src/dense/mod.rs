//! Self-contained dense complex linear algebra.

pub mod eig;
pub mod kron;
pub mod lu;
mod matrix;
pub mod qr;
pub mod random;
pub mod schur;
pub mod svd;
pub mod sylvester;

pub use eig::{eig_dense, eigvals, EigenPair};
pub use kron::kron;
pub use lu::LuFactorization;
pub use matrix::ComplexMatrix;
pub use qr::lstsq;
pub use schur::{schur, SchurFactorization};
pub use svd::{smallest_singular_triplets, svd, SingularTriplet, Svd};
pub use sylvester::{solve_sylvester, SylvesterSolver};
