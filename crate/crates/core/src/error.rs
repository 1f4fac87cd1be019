use thiserror::Error;

/// Errors raised by the numerical kernels and the scanning pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("QR iteration did not converge after {sweeps} sweeps (n = {n})")]
    SchurNoConvergence { n: usize, sweeps: usize },

    #[error("Sylvester operator is singular: min |r_ii + s_jj| = {min_gap:e} below threshold {threshold:e}")]
    SingularSylvester { min_gap: f64, threshold: f64 },

    #[error("least-squares matrix is rank deficient (|r_{index}{index}| = {value:e})")]
    RankDeficient { index: usize, value: f64 },

    #[error("matrix is singular to working precision")]
    SingularMatrix,

    #[error("mass matrix is singular (sigma_min = {sigma_min:e}, ||M|| = {norm:e})")]
    SingularMass { sigma_min: f64, norm: f64 },

    #[error("eigenvalue collision: shift {sigma_re} + {sigma_im}i is an eigenvalue of the MFRD pencil")]
    EigenvalueCollision { sigma_re: f64, sigma_im: f64 },

    #[error("Rayleigh quotient denominator {denominator:e} is below threshold {threshold:e}")]
    DegenerateQuotient { denominator: f64, threshold: f64 },

    #[error("explicit Delta oracle requested for n = {n}, cap is {cap}")]
    OracleTooLarge { n: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(String),

    #[error("matrix {0} has a nonzero imaginary part")]
    NonRealEntries(String),

    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("Gauss-Newton residual stagnated at {residual:e} after {iterations} iterations")]
    StagnatedResidual { residual: f64, iterations: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
