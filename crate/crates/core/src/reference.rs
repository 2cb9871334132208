//! Reference instances: an 8-point system-identification problem, a degree-2
//! process for positive-degree detection, and a degree-6 process for model
//! reduction.

use num_complex::Complex64;

use crate::polyalg::MonicPolynomial;
use crate::problem::{InterpolationProblem, Node};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn polar_pair(r: f64, t: f64) -> [Complex64; 2] {
    [Complex64::from_polar(r, t), Complex64::from_polar(r, -t)]
}

fn from_roots(roots: &[Complex64]) -> MonicPolynomial {
    MonicPolynomial::from_roots(roots).expect("reference roots are conjugate-closed")
}

pub fn system_identification_zeros() -> Vec<Complex64> {
    let mut z = Vec::new();
    z.extend(polar_pair(0.95, 2.3));
    z.extend(polar_pair(0.95, 1.22));
    z.extend([c(0.0, 0.99), c(0.0, -0.99), c(-0.99, 0.0)]);
    z
}

/// Eight interpolation conditions with seven spectral zeros close to the unit circle.
pub fn system_identification() -> InterpolationProblem {
    let nodes = vec![
        Node::Infinity,
        Node::Finite(c(0.3344, -1.2044)),
        Node::Finite(c(0.3344, 1.2044)),
        Node::Finite(c(0.8709, -0.8967)),
        Node::Finite(c(0.8709, 0.8967)),
        Node::Finite(c(1.1, 0.0)),
        Node::Finite(c(-0.6474, -0.8893)),
        Node::Finite(c(-0.6474, 0.8893)),
    ];
    let values = vec![
        c(0.5, 0.0),
        c(0.5451, 0.3645),
        c(0.5451, -0.3645),
        c(0.7973, 0.2568),
        c(0.7973, -0.2568),
        c(0.7693, 0.0),
        c(0.7693, -0.7693),
        c(0.7693, 0.7693),
    ];
    InterpolationProblem::new(nodes, values, from_roots(&system_identification_zeros()))
}

/// Published numerator of the system-identification interpolant, to four digits.
pub const SYSTEM_IDENTIFICATION_B: [f64; 8] =
    [1.0, -1.364, 1.112, -0.3812, -0.4479, 1.119, -1.412, 0.8781];

/// Published denominator. The `z^3` coefficient is printed without a sign, so
/// only its magnitude is meaningful.
pub const SYSTEM_IDENTIFICATION_A: [f64; 8] =
    [1.0, -1.771, 1.815, -1.205, 1.28, -1.814, 1.773, -0.8775];
pub const SYSTEM_IDENTIFICATION_A_UNSIGNED_INDEX: usize = 4;

/// Zeros `0.31 e^{+-0.98i}`.
pub fn degree_two_sigma() -> MonicPolynomial {
    from_roots(&polar_pair(0.31, 0.98))
}

/// Poles `0.76 e^{+-1.45i}`.
pub fn degree_two_a() -> MonicPolynomial {
    from_roots(&polar_pair(0.76, 1.45))
}

/// The extra zero pair `0.6 e^{+-1.5i}` used in place of `z^2` at order 4.
pub fn near_cancellation_pair() -> [Complex64; 2] {
    polar_pair(0.6, 1.5)
}

pub fn model_reduction_zeros() -> Vec<Complex64> {
    let mut z = Vec::new();
    z.extend(polar_pair(0.92, 1.5));
    z.extend(polar_pair(0.49, 1.4));
    z.extend(polar_pair(0.95, 2.5));
    z
}

pub fn model_reduction_poles() -> Vec<Complex64> {
    let mut p = Vec::new();
    p.extend(polar_pair(0.8, 2.1));
    p.extend(polar_pair(0.83, 1.34));
    p.extend(polar_pair(0.76, 0.8));
    p
}

/// Degree-6 process used for model reduction.
pub fn model_reduction_sigma() -> MonicPolynomial {
    from_roots(&model_reduction_zeros())
}

pub fn model_reduction_a() -> MonicPolynomial {
    from_roots(&model_reduction_poles())
}
