//! JSON file formats. Polynomial coefficients are always listed in
//! descending powers, leading coefficient first.
//!
//! Problem files:
//!
//! ```json
//! { "nodes": ["inf", {"re": 1.1, "im": 0.0}],
//!   "values": [{"re": 0.5, "im": 0.0}, {"re": 0.7, "im": 0.0}],
//!   "sigma_roots": [{"re": -0.3, "im": 0.0}] }
//! ```
//!
//! `sigma_coeffs: [1, s1, ..., sn]` may replace `sigma_roots`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::continuation::Solution;
use crate::error::{Error, Result};
use crate::polyalg::MonicPolynomial;
use crate::problem::{InterpolationProblem, Node};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexRepr {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Complex64> for ComplexRepr {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexRepr> for Complex64 {
    fn from(z: ComplexRepr) -> Self {
        Complex64::new(z.re, z.im)
    }
}

pub fn complex_list(zs: &[Complex64]) -> Vec<ComplexRepr> {
    zs.iter().copied().map(Into::into).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeRepr {
    Named(String),
    Point(ComplexRepr),
}

impl NodeRepr {
    fn to_node(&self) -> Result<Node> {
        match self {
            NodeRepr::Named(s) if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity") => {
                Ok(Node::Infinity)
            }
            NodeRepr::Named(s) => Err(Error::Parse(format!(
                "unknown node name {s:?}; use \"inf\" or {{\"re\":..,\"im\":..}}"
            ))),
            NodeRepr::Point(z) => Ok(Node::Finite((*z).into())),
        }
    }
}

impl From<Node> for NodeRepr {
    fn from(z: Node) -> Self {
        match z {
            Node::Infinity => NodeRepr::Named("inf".into()),
            Node::Finite(z) => NodeRepr::Point(z.into()),
        }
    }
}

/// Spectral zeros or monic coefficients of a real polynomial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PolySpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<ComplexRepr>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
}

pub fn poly_from_parts(
    roots: &Option<Vec<ComplexRepr>>,
    coeffs: &Option<Vec<f64>>,
    what: &str,
) -> Result<MonicPolynomial> {
    match (roots, coeffs) {
        (Some(_), Some(_)) => Err(Error::Parse(format!(
            "give either {what}_roots or {what}_coeffs, not both"
        ))),
        (Some(r), None) => {
            let r: Vec<Complex64> = r.iter().copied().map(Into::into).collect();
            MonicPolynomial::from_roots(&r)
        }
        (None, Some(c)) => MonicPolynomial::new(c.clone()),
        (None, None) => Err(Error::Parse(format!(
            "missing {what}_roots or {what}_coeffs"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub nodes: Vec<NodeRepr>,
    pub values: Vec<ComplexRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_roots: Option<Vec<ComplexRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_coeffs: Option<Vec<f64>>,
}

impl ProblemFile {
    pub fn to_problem(&self) -> Result<InterpolationProblem> {
        let nodes = self
            .nodes
            .iter()
            .map(NodeRepr::to_node)
            .collect::<Result<Vec<_>>>()?;
        let values = self.values.iter().copied().map(Into::into).collect();
        let sigma = poly_from_parts(&self.sigma_roots, &self.sigma_coeffs, "sigma")?;
        Ok(InterpolationProblem::new(nodes, values, sigma))
    }

    pub fn from_problem(p: &InterpolationProblem) -> Self {
        Self {
            nodes: p.nodes.iter().copied().map(Into::into).collect(),
            values: complex_list(&p.values),
            sigma_roots: None,
            sigma_coeffs: Some(p.sigma.coeffs().to_vec()),
        }
    }
}

pub fn parse_problem(json: &str) -> Result<InterpolationProblem> {
    let file: ProblemFile = serde_json::from_str(json)?;
    file.to_problem()
}

/// Solution summary as written by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionFile {
    pub coefficient_order: &'static str,
    /// `f(z) = scale * b(z) / (2 a(z))`; `a` and `b` are monic.
    pub interpolant: &'static str,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub sigma: Vec<f64>,
    pub rho: f64,
    pub scale: f64,
    pub p: Vec<f64>,
    #[serde(rename = "P")]
    pub p_matrix: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub node_residuals: Vec<f64>,
    pub max_residual: f64,
    pub cee_residual: f64,
    pub poles: Vec<ComplexRepr>,
    pub zeros: Vec<ComplexRepr>,
    pub spectral_zeros: Vec<ComplexRepr>,
    pub v_condition: f64,
    pub accepted_states: usize,
}

impl SolutionFile {
    pub fn from_solution(s: &Solution) -> Self {
        let n = s.p_matrix.nrows();
        Self {
            coefficient_order: "descending",
            interpolant: "f(z) = scale * b(z) / (2 a(z))",
            a: s.a.coeffs().to_vec(),
            b: s.b.coeffs().to_vec(),
            sigma: s.sigma.coeffs().to_vec(),
            rho: s.rho,
            scale: s.scale,
            p: s.p.clone(),
            p_matrix: (0..n)
                .map(|i| s.p_matrix.row(i).iter().copied().collect())
                .collect(),
            singular_values: s.diagnostics.singular_values.clone(),
            node_residuals: s.diagnostics.node_residuals.clone(),
            max_residual: s.diagnostics.max_residual,
            cee_residual: s.diagnostics.cee_residual,
            poles: complex_list(&s.diagnostics.poles),
            zeros: complex_list(&s.diagnostics.zeros),
            spectral_zeros: complex_list(&s.diagnostics.spectral_zeros),
            v_condition: s.diagnostics.v_condition,
            accepted_states: s.trajectory.len(),
        }
    }
}
