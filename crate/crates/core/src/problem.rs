//! Interpolation problem data, validation, and the Pick matrix test.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyalg::{max_modulus, MonicPolynomial};

/// Relative tolerance used when matching a node or value to its conjugate partner.
pub const CONJUGATE_TOL: f64 = 1e-9;
/// Default relative eigenvalue floor for positive definiteness.
pub const DEFAULT_PD_TOL: f64 = 1e-12;
/// Largest allowed Hermitian deviation, relative to the matrix scale.
const HERMITIAN_TOL: f64 = 1e-10;

/// An interpolation node in the complement of the closed unit disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Node {
    Infinity,
    Finite(Complex64),
}

impl Node {
    /// `1/z`, exactly zero at infinity.
    pub fn inv(&self) -> Complex64 {
        match self {
            Node::Infinity => Complex64::new(0.0, 0.0),
            Node::Finite(z) => z.inv(),
        }
    }

    pub fn conj(&self) -> Node {
        match self {
            Node::Infinity => Node::Infinity,
            Node::Finite(z) => Node::Finite(z.conj()),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Node::Infinity)
    }

    fn close_to(&self, other: &Node) -> bool {
        match (self, other) {
            (Node::Infinity, Node::Infinity) => true,
            (Node::Finite(a), Node::Finite(b)) => {
                (a - b).norm() <= CONJUGATE_TOL * a.norm().max(b.norm()).max(1.0)
            }
            _ => false,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Infinity => write!(f, "inf"),
            Node::Finite(z) => write!(f, "{z}"),
        }
    }
}

/// Nodes `z_0 = inf, z_1, ..., z_n`, values `w_0, ..., w_n`, and the
/// spectral-zero polynomial `sigma` of degree `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterpolationProblem {
    pub nodes: Vec<Node>,
    pub values: Vec<Complex64>,
    pub sigma: MonicPolynomial,
}

/// A single failed check, reported as data so callers can list all of them.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Length {
        nodes: usize,
        values: usize,
        sigma_degree: usize,
    },
    EmptyProblem,
    FirstNodeNotInfinity,
    ExtraInfinity { index: usize },
    DuplicateNode { first: usize, second: usize },
    NodeInsideDisk { index: usize, modulus: f64 },
    ValueNotInRightHalfPlane { index: usize, re: f64 },
    FirstValueNotReal { im: f64 },
    MissingConjugateNode { index: usize },
    ConjugateValueMismatch { index: usize, partner: usize },
    SigmaNotSchur { max_modulus: f64 },
    PickNotPositiveDefinite { min_eigenvalue: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            Length {
                nodes,
                values,
                sigma_degree,
            } => write!(
                f,
                "length mismatch: {nodes} nodes, {values} values, sigma of degree {sigma_degree} (need n+1, n+1, n)"
            ),
            EmptyProblem => write!(f, "problem has no nodes"),
            FirstNodeNotInfinity => write!(f, "node 0 must be the point at infinity"),
            ExtraInfinity { index } => write!(f, "node {index} is infinity; only node 0 may be"),
            DuplicateNode { first, second } => write!(f, "nodes {first} and {second} coincide"),
            NodeInsideDisk { index, modulus } => {
                write!(f, "node {index} has modulus {modulus}, must exceed 1")
            }
            ValueNotInRightHalfPlane { index, re } => {
                write!(f, "value {index} has real part {re}, must be positive")
            }
            FirstValueNotReal { im } => write!(f, "value 0 must be real, imaginary part is {im}"),
            MissingConjugateNode { index } => {
                write!(f, "node {index} has no conjugate partner in the node set")
            }
            ConjugateValueMismatch { index, partner } => write!(
                f,
                "values {index} and {partner} are not conjugate although their nodes are"
            ),
            SigmaNotSchur { max_modulus } => write!(
                f,
                "spectral-zero polynomial is not Schur (root of modulus {max_modulus})"
            ),
            PickNotPositiveDefinite { min_eigenvalue } => write!(
                f,
                "Pick matrix is not positive definite (min eigenvalue {min_eigenvalue:e})"
            ),
        }
    }
}

impl InterpolationProblem {
    pub fn new(nodes: Vec<Node>, values: Vec<Complex64>, sigma: MonicPolynomial) -> Self {
        Self {
            nodes,
            values,
            sigma,
        }
    }

    /// `n`, the degree bound of the interpolant.
    pub fn order(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    /// Index of the node conjugate to `k`, if present.
    pub fn conjugate_index(&self, k: usize) -> Option<usize> {
        let target = self.nodes[k].conj();
        if self.nodes[k].close_to(&target) {
            return Some(k);
        }
        self.nodes.iter().position(|z| z.close_to(&target))
    }

    /// Checks every structural invariant plus Pick positive definiteness.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            out.push(Violation::EmptyProblem);
            return out;
        }
        if self.values.len() != self.nodes.len() || self.sigma.degree() + 1 != self.nodes.len() {
            out.push(Violation::Length {
                nodes: self.nodes.len(),
                values: self.values.len(),
                sigma_degree: self.sigma.degree(),
            });
            return out;
        }
        if !self.nodes[0].is_infinite() {
            out.push(Violation::FirstNodeNotInfinity);
        }
        for (k, z) in self.nodes.iter().enumerate().skip(1) {
            match z {
                Node::Infinity => out.push(Violation::ExtraInfinity { index: k }),
                Node::Finite(z) if !(z.norm() > 1.0) => out.push(Violation::NodeInsideDisk {
                    index: k,
                    modulus: z.norm(),
                }),
                _ => {}
            }
        }
        for k in 0..self.nodes.len() {
            for l in k + 1..self.nodes.len() {
                if self.nodes[k].close_to(&self.nodes[l]) {
                    out.push(Violation::DuplicateNode {
                        first: k,
                        second: l,
                    });
                }
            }
        }
        for (k, w) in self.values.iter().enumerate() {
            if !(w.re > 0.0) {
                out.push(Violation::ValueNotInRightHalfPlane { index: k, re: w.re });
            }
        }
        if self.values[0].im != 0.0 {
            out.push(Violation::FirstValueNotReal {
                im: self.values[0].im,
            });
        }
        for k in 1..self.nodes.len() {
            match self.conjugate_index(k) {
                None => out.push(Violation::MissingConjugateNode { index: k }),
                Some(l) if l >= k => {
                    let (wk, wl) = (self.values[k], self.values[l]);
                    let tol = CONJUGATE_TOL * wk.norm().max(wl.norm()).max(1.0);
                    if (wk - wl.conj()).norm() > tol {
                        out.push(Violation::ConjugateValueMismatch {
                            index: k,
                            partner: l,
                        });
                    }
                }
                Some(_) => {}
            }
        }
        let roots = self.sigma.roots();
        let m = max_modulus(&roots);
        if !(m < 1.0) {
            out.push(Violation::SigmaNotSchur { max_modulus: m });
        }
        if out.is_empty() {
            if let Ok(pick) = self.pick_matrix() {
                let eig = pick.symmetric_eigenvalues();
                let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
                let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if !(max > 0.0 && min > DEFAULT_PD_TOL * max) {
                    out.push(Violation::PickNotPositiveDefinite {
                        min_eigenvalue: min,
                    });
                }
            }
        }
        out
    }

    /// `[(w_k + conj w_l) / (1 - z_k^-1 conj(z_l^-1))]`, with `z^-1 = 0` at infinity.
    pub fn pick_matrix(&self) -> Result<DMatrix<Complex64>> {
        let m = self.nodes.len();
        if self.values.len() != m {
            return Err(Error::Dimension(format!(
                "{} nodes but {} values",
                m,
                self.values.len()
            )));
        }
        for k in 0..m {
            for l in k + 1..m {
                if self.nodes[k] == self.nodes[l] {
                    return Err(Error::InvalidArgument(format!(
                        "nodes {k} and {l} coincide"
                    )));
                }
            }
        }
        let inv: Vec<Complex64> = self.nodes.iter().map(Node::inv).collect();
        Ok(DMatrix::from_fn(m, m, |k, l| {
            (self.values[k] + self.values[l].conj()) / (1.0 - inv[k] * inv[l].conj())
        }))
    }

    /// Rescales values so that `w_0 = 1/2`.
    pub fn normalize(&self) -> Result<NormalizedProblem> {
        let w0 = *self
            .values
            .first()
            .ok_or_else(|| Error::InvalidArgument("problem has no values".into()))?;
        if w0.im != 0.0 || !(w0.re > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "w_0 must be real and positive, got {w0}"
            )));
        }
        let scale = 2.0 * w0.re;
        let mut problem = self.clone();
        for w in problem.values.iter_mut() {
            *w /= scale;
        }
        problem.values[0] = Complex64::new(0.5, 0.0);
        Ok(NormalizedProblem { problem, scale })
    }
}

/// A problem rescaled to `w_0 = 1/2`, together with the factor `2 w_0` that undoes it.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedProblem {
    pub problem: InterpolationProblem,
    pub scale: f64,
}

impl NormalizedProblem {
    pub fn denormalize(&self) -> InterpolationProblem {
        let mut p = self.problem.clone();
        for w in p.values.iter_mut() {
            *w *= self.scale;
        }
        p
    }
}

/// True iff the smallest eigenvalue exceeds `tol_rel` times the largest.
pub fn is_positive_definite(m: &DMatrix<Complex64>, tol_rel: f64) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::Dimension("matrix is not square".into()));
    }
    let scale = m.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let dev = (m - m.adjoint()).iter().map(|x| x.norm()).fold(0.0, f64::max);
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(dev));
    }
    if m.nrows() == 0 {
        return Ok(true);
    }
    let eig = m.symmetric_eigenvalues();
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(max > 0.0 && min > tol_rel * max)
}
