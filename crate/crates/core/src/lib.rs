//! Degree-constrained Nevanlinna-Pick interpolation through the covariance
//! extension equation (CEE).
//!
//! Given nodes `z_0 = inf, z_1, ..., z_n` outside the unit disk, values
//! `w_k` in the open right half-plane with a positive definite Pick matrix,
//! and a Schur polynomial `sigma` of degree `n`, the library finds the unique
//! strictly positive real `f = b / (2a)` of degree at most `n` with
//! `f(z_k) = w_k` and spectral zeros at the roots of `sigma`.
//!
//! The data are deformed from the central problem (`w_k = 1/2`, solution
//! `f = 1/2`) to the target along `W(nu) = I/2 + nu (W - I/2)` and the
//! unknown `p = P h` is tracked with an Euler predictor and a Newton
//! corrector. `P` itself is recovered at the end from a Stein equation.
//!
//! ```no_run
//! use nevpick::{reference, solve, SolveOptions};
//!
//! let problem = reference::system_identification();
//! let solution = solve(&problem, &SolveOptions::default()).unwrap();
//! println!("a = {:?}", solution.a.coeffs());
//! ```
//!
//! Modules:
//! - [`polyalg`]: polynomials, companion matrices, the `S(.)` operator.
//! - [`problem`]: problem data, validation, Pick matrix.
//! - [`cee`]: `V`, `W(nu)`, `T(nu)`, `(u, U)`, residuals, Stein recovery of `P`.
//! - [`continuation`]: the homotopy and the path follower.
//! - [`analysis`]: singular values, degree estimation, model reduction.
//! - [`ingestion`]: simulated data through a filter bank, Monte Carlo runs.

pub mod analysis;
pub mod cee;
pub mod continuation;
pub mod error;
pub mod ingestion;
pub mod io;
pub mod polyalg;
pub mod problem;
pub mod reference;

pub use analysis::{
    estimate_positive_degree, reduce_model, singular_values, spectral_density, DegreeReport,
    ReductionSpec, RunSummary,
};
pub use cee::{CeeMatrices, CovarianceFamily, OperatorFamily, OperatorPair};
pub use continuation::{solve, solve_family, ContinuationState, SolveOptions, Solution};
pub use error::{Error, Result};
pub use ingestion::{monte_carlo, DegreeExperiment, FilterBankSpec, Variant};
pub use polyalg::{CompanionData, MonicPolynomial};
pub use problem::{InterpolationProblem, NormalizedProblem, Node, Violation};

pub use num_complex::Complex64;
