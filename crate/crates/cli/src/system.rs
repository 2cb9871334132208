//! System description consumed by `simulate` and `detect-degree`.
//!
//! ```json
//! { "sigma_roots": [{"re": 0.17, "im": 0.26}, {"re": 0.17, "im": -0.26}],
//!   "a_coeffs": [1.0, -0.18, 0.58],
//!   "order": 4,
//!   "extra_zeros": [{"re": 0.04, "im": 0.6}, {"re": 0.04, "im": -0.6}],
//!   "bank_poles": [{"re": 0.0}, ...] }
//! ```
//!
//! Coefficients are monic in descending powers. The model zero polynomial
//! is `sigma * prod(z - extra) * z^(order - deg)`; `order` defaults to the
//! degree of `sigma` times the extra factor. `bank_poles` defaults to `0`
//! followed by `order` poles on the circle of radius 0.7.

use serde::{Deserialize, Serialize};

use nevpick::io::{poly_from_parts, ComplexRepr};
use nevpick::ingestion::{default_bank_poles, DEFAULT_BANK_RADIUS};
use nevpick::{Complex64, Error, MonicPolynomial, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_roots: Option<Vec<ComplexRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_roots: Option<Vec<ComplexRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_zeros: Vec<ComplexRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bank_poles: Option<Vec<ComplexRepr>>,
}

/// A resolved system: the true filter and the model used for interpolation.
#[derive(Clone, Debug)]
pub struct System {
    pub sigma: MonicPolynomial,
    pub a: MonicPolynomial,
    pub sigma_hat: MonicPolynomial,
    pub bank_poles: Vec<Complex64>,
}

impl SystemFile {
    pub fn resolve(&self) -> Result<System> {
        let sigma = poly_from_parts(&self.sigma_roots, &self.sigma_coeffs, "sigma")?;
        let a = poly_from_parts(&self.a_roots, &self.a_coeffs, "a")?;
        if sigma.degree() != a.degree() {
            return Err(Error::Dimension(format!(
                "sigma has degree {} but a has degree {}",
                sigma.degree(),
                a.degree()
            )));
        }
        let extra: Vec<Complex64> = self.extra_zeros.iter().copied().map(Into::into).collect();
        let base = sigma.mul(&MonicPolynomial::from_roots(&extra)?);
        let order = self.order.unwrap_or(base.degree());
        if order < base.degree() {
            return Err(Error::InvalidArgument(format!(
                "order {order} is below the degree {} of the zero polynomial",
                base.degree()
            )));
        }
        let sigma_hat = base.mul(&MonicPolynomial::monomial(order - base.degree()));
        let bank_poles = match &self.bank_poles {
            Some(p) => p.iter().copied().map(Into::into).collect(),
            None => default_bank_poles(order, DEFAULT_BANK_RADIUS),
        };
        if bank_poles.len() != order + 1 {
            return Err(Error::Dimension(format!(
                "{} bank poles given for order {order} (need order + 1)",
                bank_poles.len()
            )));
        }
        Ok(System {
            sigma,
            a,
            sigma_hat,
            bank_poles,
        })
    }
}
