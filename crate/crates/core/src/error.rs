use thiserror::Error;

use crate::problem::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial must be monic, leading coefficient is {0}")]
    NotMonic(f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("problem failed validation with {} violation(s)", .0.len())]
    Invalid(Vec<Violation>),

    #[error("singular matrix encountered in {0}")]
    Singular(&'static str),

    #[error("{context}: imaginary residue {residue:e} exceeds tolerance")]
    NotReal { context: &'static str, residue: f64 },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("polynomial is not Schur stable (largest root modulus {0})")]
    NotSchur(f64),

    #[error("point is off the solution manifold: |Ph - p| = {0:e}")]
    OffTrajectory(f64),

    #[error("h'Ph = {0} is not below 1")]
    RhoNotPositive(f64),

    #[error("recovered P is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("Toeplitz matrix of the covariance sequence is not positive definite")]
    NotCovariance,

    #[error("corrector did not converge in {iters} iterations (residual {residual:e})")]
    CorrectorDiverged { iters: usize, residual: f64 },

    #[error("path following stalled at nu = {nu}: step fell below {step_min:e}")]
    StepUnderflow { nu: f64, step_min: f64 },

    #[error("conjugate pair would be split: {0}")]
    SplitConjugatePair(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
