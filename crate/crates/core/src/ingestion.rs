//! Interpolation data from a simulated ARMA process observed through a bank
//! of first-order filters `G_k(z) = z / (z - p_k)`.
//!
//! For a stationary `y` with spectral density `f(z) + f(1/z)`,
//! `E{u_k^2} = 2 f(1/p_k) / (1 - p_k^2)`, so each filter output yields one
//! interpolation value at the node `1/p_k` (infinity for `p_0 = 0`).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{DegreeReport, RunSummary, DEFAULT_TAU_RANK};
use crate::continuation::{solve, SolveOptions, Solution};
use crate::error::{Error, Result};
use crate::polyalg::{build_s, eval_reversed, max_modulus, sym_coeffs, MonicPolynomial};
use crate::problem::{InterpolationProblem, Node};

pub const DEFAULT_BURN_IN: usize = 1000;
pub const DEFAULT_BANK_RADIUS: f64 = 0.7;

/// Filter-bank poles and sampling parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilterBankSpec {
    /// `p_0 = 0` first; the rest inside the unit disk and closed under conjugation.
    pub poles: Vec<Complex64>,
    pub burn_in: usize,
    pub samples: usize,
    pub seed: u64,
}

/// `p_0 = 0` followed by `n` poles equally spaced on the circle of radius
/// `radius` at angles `(2j - 1) pi / n`; a single real pole at `-radius`
/// appears when `n` is odd.
pub fn default_bank_poles(n: usize, radius: f64) -> Vec<Complex64> {
    let mut poles = vec![Complex64::new(0.0, 0.0)];
    for j in 1..=n {
        let t = (2 * j - 1) as f64 * PI / n as f64;
        let mut p = Complex64::from_polar(radius, t);
        if 2 * j - 1 == n {
            p = Complex64::new(-radius, 0.0);
        }
        poles.push(p);
    }
    poles
}

impl FilterBankSpec {
    pub fn new(poles: Vec<Complex64>, samples: usize, burn_in: usize, seed: u64) -> Self {
        Self {
            poles,
            burn_in,
            samples,
            seed,
        }
    }

    pub fn with_default_poles(n: usize, samples: usize, seed: u64) -> Self {
        Self::new(
            default_bank_poles(n, DEFAULT_BANK_RADIUS),
            samples,
            DEFAULT_BURN_IN,
            seed,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.poles.first() != Some(&Complex64::new(0.0, 0.0)) {
            return bad("filter bank pole p_0 must be 0".into());
        }
        for (k, p) in self.poles.iter().enumerate() {
            if !(p.norm() < 1.0) {
                return bad(format!("filter bank pole {k} = {p} is not inside the unit disk"));
            }
            for (l, q) in self.poles.iter().enumerate().skip(k + 1) {
                if (p - q).norm() < 1e-12 {
                    return bad(format!("filter bank poles {k} and {l} coincide"));
                }
            }
            if conjugate_partner(&self.poles, k).is_none() {
                return bad(format!("filter bank pole {k} = {p} has no conjugate partner"));
            }
        }
        Ok(())
    }

    /// [`validate`](Self::validate) plus a positive sample count, for simulation.
    pub fn validate_sampling(&self) -> Result<()> {
        self.validate()?;
        if self.samples == 0 {
            return Err(Error::InvalidArgument("sample count must be positive".into()));
        }
        Ok(())
    }

    /// `1/p_k`, with `p_0 = 0` mapped to infinity.
    pub fn nodes(&self) -> Vec<Node> {
        nodes_from_poles(&self.poles)
    }
}

pub fn nodes_from_poles(poles: &[Complex64]) -> Vec<Node> {
    poles
        .iter()
        .map(|p| {
            if *p == Complex64::new(0.0, 0.0) {
                Node::Infinity
            } else {
                Node::Finite(p.inv())
            }
        })
        .collect()
}

fn conjugate_partner(points: &[Complex64], k: usize) -> Option<usize> {
    let target = points[k].conj();
    let tol = 1e-12 * points[k].norm().max(1.0);
    if (points[k] - target).norm() <= tol {
        return Some(k);
    }
    points.iter().position(|q| (q - target).norm() <= tol)
}

/// Unit-variance Gaussian white noise from a seeded ChaCha8 stream.
pub fn white_noise(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// `y_t = sum_i sigma_i e_(t-i) - sum_(j>=1) a_j y_(t-j)` from zero initial
/// state; returns the `samples` values following `burn_in` discarded ones.
pub fn simulate_arma(
    sigma: &MonicPolynomial,
    a: &MonicPolynomial,
    samples: usize,
    burn_in: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if sigma.degree() != a.degree() {
        return Err(Error::Dimension(format!(
            "numerator degree {} differs from denominator degree {}",
            sigma.degree(),
            a.degree()
        )));
    }
    let roots = a.roots();
    if !(max_modulus(&roots) < 1.0) {
        return Err(Error::NotSchur(max_modulus(&roots)));
    }
    let e = white_noise(samples + burn_in, seed);
    let (s, ac) = (sigma.coeffs(), a.coeffs());
    let n = a.degree();
    let mut y = vec![0.0; e.len()];
    for t in 0..e.len() {
        let mut acc = e[t];
        for i in 1..=n.min(t) {
            acc += s[i] * e[t - i] - ac[i] * y[t - i];
        }
        y[t] = acc;
    }
    y.drain(..burn_in);
    Ok(y)
}

/// `u_k(t) = p_k u_k(t-1) + y(t)`, `u_k(-1) = 0`, for each pole.
pub fn filter_bank(y: &[f64], poles: &[Complex64]) -> Vec<Vec<Complex64>> {
    poles
        .iter()
        .map(|&p| {
            let mut state = Complex64::new(0.0, 0.0);
            y.iter()
                .map(|&v| {
                    state = p * state + v;
                    state
                })
                .collect()
        })
        .collect()
}

/// Averages each value with the conjugate of its partner's and makes `w_0` real.
fn symmetrize(values: &mut [Complex64], poles: &[Complex64]) {
    let raw = values.to_vec();
    for k in 0..values.len() {
        if let Some(l) = conjugate_partner(poles, k) {
            values[k] = (raw[k] + raw[l].conj()) * 0.5;
        }
    }
    if let Some(w0) = values.first_mut() {
        w0.im = 0.0;
    }
}

/// `w_k = (1 - p_k^2) mean(u_k^2) / 2`, using the plain (unconjugated) square.
pub fn estimate_values(outputs: &[Vec<Complex64>], poles: &[Complex64]) -> Vec<Complex64> {
    let mut values: Vec<Complex64> = outputs
        .iter()
        .zip(poles)
        .map(|(u, &p)| {
            let m = u.iter().map(|x| x * x).sum::<Complex64>() / u.len() as f64;
            (1.0 - p * p) * m * 0.5
        })
        .collect();
    symmetrize(&mut values, poles);
    values
}

/// Numerator `beta` of the positive-real part `f = beta / (2a)` of the spectral
/// density `sigma(z) sigma(1/z) / (a(z) a(1/z))`, from `S(a) beta = sym(sigma, sigma)`.
pub fn positive_real_numerator(sigma: &MonicPolynomial, a: &MonicPolynomial) -> Result<Vec<f64>> {
    if sigma.degree() != a.degree() {
        return Err(Error::Dimension("sigma and a must have equal degree".into()));
    }
    let rhs = nalgebra::DVector::from_vec(sym_coeffs(sigma.coeffs(), sigma.coeffs())?);
    let beta = build_s(a.coeffs())
        .lu()
        .solve(&rhs)
        .ok_or(Error::Singular("S(a) (a has reciprocal root pairs)"))?;
    Ok(beta.as_slice().to_vec())
}

/// Exact interpolation values `f(1/p_k)` of the process `y = (sigma/a) e`.
pub fn exact_values(
    sigma: &MonicPolynomial,
    a: &MonicPolynomial,
    poles: &[Complex64],
) -> Result<Vec<Complex64>> {
    let beta = positive_real_numerator(sigma, a)?;
    let mut values: Vec<Complex64> = poles
        .iter()
        .map(|&p| eval_reversed(&beta, p) / (eval_reversed(a.coeffs(), p) * 2.0))
        .collect();
    symmetrize(&mut values, poles);
    Ok(values)
}

/// Interpolation problem at the nodes `1/p_k`.
pub fn bank_problem(
    poles: &[Complex64],
    values: Vec<Complex64>,
    sigma: MonicPolynomial,
) -> InterpolationProblem {
    InterpolationProblem::new(nodes_from_poles(poles), values, sigma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Values computed exactly from the true system.
    Exact,
    /// Values estimated from a simulated realization.
    MonteCarlo,
}

/// True system, solve-time zero polynomial, and sampling plan for a
/// positive-degree experiment.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeExperiment {
    #[serde(serialize_with = "ser_poly")]
    pub truth_sigma: MonicPolynomial,
    #[serde(serialize_with = "ser_poly")]
    pub truth_a: MonicPolynomial,
    /// Degree-`n` spectral-zero polynomial used in the solve.
    #[serde(serialize_with = "ser_poly")]
    pub sigma_hat: MonicPolynomial,
    pub bank: FilterBankSpec,
    pub runs: usize,
    pub variant: Variant,
    pub tau_rank: f64,
    pub opts: SolveOptions,
}

fn ser_poly<S: serde::Serializer>(p: &MonicPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.coeffs())
}

impl DegreeExperiment {
    /// Order-`n` experiment with `sigma_hat = z^(n - d) sigma`, default bank poles.
    pub fn padded(
        truth_sigma: MonicPolynomial,
        truth_a: MonicPolynomial,
        n: usize,
        variant: Variant,
        samples: usize,
        runs: usize,
        seed: u64,
    ) -> Result<Self> {
        let d = truth_sigma.degree();
        if n < d {
            return Err(Error::InvalidArgument(format!(
                "order {n} is below the true degree {d}"
            )));
        }
        let sigma_hat = truth_sigma.mul(&MonicPolynomial::monomial(n - d));
        Ok(Self {
            truth_sigma,
            truth_a,
            sigma_hat,
            bank: FilterBankSpec::with_default_poles(n, samples, seed),
            runs,
            variant,
            tau_rank: DEFAULT_TAU_RANK,
            opts: SolveOptions::default(),
        })
    }

    pub fn order(&self) -> usize {
        self.sigma_hat.degree()
    }

    pub fn run_seed(&self, run: usize) -> u64 {
        self.bank.seed ^ run as u64
    }

    /// Interpolation data for one run.
    pub fn problem(&self, run: usize) -> Result<InterpolationProblem> {
        if self.bank.poles.len() != self.order() + 1 {
            return Err(Error::Dimension(format!(
                "{} bank poles for order {}",
                self.bank.poles.len(),
                self.order()
            )));
        }
        self.bank.validate()?;
        let values = match self.variant {
            Variant::Exact => exact_values(&self.truth_sigma, &self.truth_a, &self.bank.poles)?,
            Variant::MonteCarlo => {
                self.bank.validate_sampling()?;
                let y = simulate_arma(
                    &self.truth_sigma,
                    &self.truth_a,
                    self.bank.samples,
                    self.bank.burn_in,
                    self.run_seed(run),
                )?;
                estimate_values(&filter_bank(&y, &self.bank.poles), &self.bank.poles)
            }
        };
        Ok(bank_problem(&self.bank.poles, values, self.sigma_hat.clone()))
    }

    pub fn run_once(&self, run: usize) -> Result<Solution> {
        solve(&self.problem(run)?, &self.opts)
    }

    /// Number of independent runs actually performed (the exact variant needs one).
    pub fn effective_runs(&self) -> usize {
        match self.variant {
            Variant::Exact => 1,
            Variant::MonteCarlo => self.runs.max(1),
        }
    }
}

/// Runs the experiment and aggregates singular values of `P` over runs.
/// Runs execute in parallel; results are collected in run order.
pub fn monte_carlo(exp: &DegreeExperiment) -> DegreeReport {
    let results: Vec<(usize, Result<RunSummary>)> = (0..exp.effective_runs())
        .into_par_iter()
        .map(|i| (i, exp.run_once(i).map(|s| RunSummary::from_solution(&s))))
        .collect();
    DegreeReport::from_runs(results, exp.tau_rank)
}
