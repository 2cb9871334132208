//! Browser bindings for the nevpick solver.
//!
//! Each exported function takes and returns JSON strings. The `*_json`
//! functions hold the logic and run natively in tests; the `#[wasm_bindgen]`
//! wrappers only convert errors.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use nevpick::analysis::{log_spectral_deviation, spectral_density, theta_grid};
use nevpick::ingestion::{bank_problem, default_bank_poles, exact_values, DEFAULT_BANK_RADIUS};
use nevpick::io::{ComplexRepr, ProblemFile};
use nevpick::{
    estimate_positive_degree, monte_carlo, reduce_model, reference, solve, Complex64,
    DegreeExperiment, MonicPolynomial, ReductionSpec, SolveOptions, Solution, Variant,
};

const SPECTRUM_POINTS: usize = 512;
const MAX_TRAJECTORY_POINTS: usize = 400;

type Pair = [f64; 2];

fn pairs(zs: &[Complex64]) -> Vec<Pair> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Spectrum {
    theta: Vec<f64>,
    phi: Vec<f64>,
}

fn spectrum(sol: &Solution) -> Spectrum {
    let theta = theta_grid(SPECTRUM_POINTS);
    let phi = spectral_density(sol, &theta);
    Spectrum { theta, phi }
}

#[derive(Serialize)]
struct TrajectoryPoint {
    nu: f64,
    poles: Vec<Pair>,
}

#[derive(Serialize)]
struct SolveOutput {
    a: Vec<f64>,
    b: Vec<f64>,
    rho: f64,
    scale: f64,
    max_residual: f64,
    accepted_states: usize,
    poles: Vec<Pair>,
    zeros: Vec<Pair>,
    spectral_zeros: Vec<Pair>,
    singular_values: Vec<f64>,
    trajectory: Vec<TrajectoryPoint>,
    spectrum: Spectrum,
}

/// Evenly thinned trajectory that always keeps the first and last states.
fn thin_trajectory(sol: &Solution) -> Vec<TrajectoryPoint> {
    let states = &sol.trajectory;
    let stride = states.len().div_ceil(MAX_TRAJECTORY_POINTS).max(1);
    let mut out: Vec<TrajectoryPoint> = states
        .iter()
        .step_by(stride)
        .map(|s| TrajectoryPoint {
            nu: s.nu,
            poles: pairs(&s.poles),
        })
        .collect();
    if let Some(last) = states.last() {
        if out.last().map(|p| p.nu) != Some(last.nu) {
            out.push(TrajectoryPoint {
                nu: last.nu,
                poles: pairs(&last.poles),
            });
        }
    }
    out
}

fn parse_problem(input: &str) -> Result<nevpick::InterpolationProblem, String> {
    let file: ProblemFile = serde_json::from_str(input).map_err(|e| format!("problem JSON: {e}"))?;
    file.to_problem().map_err(|e| e.to_string())
}

/// Solves a problem given in the CLI problem-file format.
pub fn solve_json(problem: &str) -> Result<String, String> {
    let problem = parse_problem(problem)?;
    let sol = solve(&problem, &SolveOptions::default()).map_err(|e| e.to_string())?;
    to_json(&SolveOutput {
        a: sol.a.coeffs().to_vec(),
        b: sol.b.coeffs().to_vec(),
        rho: sol.rho,
        scale: sol.scale,
        max_residual: sol.diagnostics.max_residual,
        accepted_states: sol.trajectory.len(),
        poles: pairs(&sol.diagnostics.poles),
        zeros: pairs(&sol.diagnostics.zeros),
        spectral_zeros: pairs(&sol.diagnostics.spectral_zeros),
        singular_values: sol.diagnostics.singular_values.clone(),
        trajectory: thin_trajectory(&sol),
        spectrum: spectrum(&sol),
    })
}

#[derive(Deserialize)]
struct ScanInput {
    sigma_roots: Vec<ComplexRepr>,
    a_roots: Vec<ComplexRepr>,
    #[serde(default)]
    extra_zeros: Vec<ComplexRepr>,
    max_order: usize,
    #[serde(default)]
    monte_carlo: bool,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default = "default_runs")]
    runs: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_tau")]
    tau_rank: f64,
}

fn default_samples() -> usize {
    10_000
}
fn default_runs() -> usize {
    10
}
fn default_tau() -> f64 {
    nevpick::analysis::DEFAULT_TAU_RANK
}

#[derive(Serialize)]
struct ScanRow {
    order: usize,
    /// Mean singular values divided by the largest.
    ratios: Vec<f64>,
    estimated_degree: usize,
    runs_succeeded: usize,
    poles: Vec<Pair>,
    error: Option<String>,
}

fn roots(list: &[ComplexRepr]) -> Vec<Complex64> {
    list.iter().copied().map(Into::into).collect()
}

/// Singular values of `P` for each model order from the true degree up to
/// `max_order`, with the zero polynomial padded by powers of `z`.
pub fn degree_scan_json(input: &str) -> Result<String, String> {
    let cfg: ScanInput = serde_json::from_str(input).map_err(|e| format!("scan JSON: {e}"))?;
    let sigma = MonicPolynomial::from_roots(&roots(&cfg.sigma_roots)).map_err(|e| e.to_string())?;
    let a = MonicPolynomial::from_roots(&roots(&cfg.a_roots)).map_err(|e| e.to_string())?;
    let base = sigma
        .mul(&MonicPolynomial::from_roots(&roots(&cfg.extra_zeros)).map_err(|e| e.to_string())?);
    if cfg.max_order > 12 {
        return Err("max_order is limited to 12 in the demo".into());
    }
    let variant = if cfg.monte_carlo { Variant::MonteCarlo } else { Variant::Exact };
    let mut rows = Vec::new();
    for n in base.degree().max(1)..=cfg.max_order {
        let mut exp =
            DegreeExperiment::padded(sigma.clone(), a.clone(), n, variant, cfg.samples, cfg.runs, cfg.seed)
                .map_err(|e| e.to_string())?;
        exp.sigma_hat = base.mul(&MonicPolynomial::monomial(n - base.degree()));
        exp.tau_rank = cfg.tau_rank;
        let report = monte_carlo(&exp);
        let s1 = report.singular_values.first().copied().unwrap_or(0.0);
        rows.push(ScanRow {
            order: n,
            ratios: report
                .singular_values
                .iter()
                .map(|s| if s1 > 0.0 { s / s1 } else { 0.0 })
                .collect(),
            estimated_degree: estimate_positive_degree(&report.singular_values, cfg.tau_rank),
            runs_succeeded: report.runs.len(),
            poles: report.poles.first().map(|p| pairs(p)).unwrap_or_default(),
            error: report.failures.first().map(|f| f.1.clone()),
        });
    }
    to_json(&rows)
}

#[derive(Deserialize)]
struct ReduceInput {
    problem: ProblemFile,
    target_degree: usize,
}

#[derive(Serialize)]
struct ReduceOutput {
    theta: Vec<f64>,
    phi_full: Vec<f64>,
    phi_reduced: Vec<f64>,
    deviation: f64,
    kept_zeros: Vec<Pair>,
    all_zeros: Vec<Pair>,
    reduced_poles: Vec<Pair>,
}

/// Solves the full problem, keeps the dominant spectral zeros and re-solves.
pub fn reduce_json(input: &str) -> Result<String, String> {
    let cfg: ReduceInput = serde_json::from_str(input).map_err(|e| format!("reduce JSON: {e}"))?;
    let problem = cfg.problem.to_problem().map_err(|e| e.to_string())?;
    let opts = SolveOptions::default();
    let full = solve(&problem, &opts).map_err(|e| e.to_string())?;
    let spec = ReductionSpec {
        node_indices: None,
        opts,
    };
    let (reduced_problem, reduced) =
        reduce_model(&problem, &full, cfg.target_degree, &spec).map_err(|e| e.to_string())?;
    let theta = theta_grid(SPECTRUM_POINTS);
    to_json(&ReduceOutput {
        phi_full: spectral_density(&full, &theta),
        phi_reduced: spectral_density(&reduced, &theta),
        deviation: log_spectral_deviation(&full, &reduced, &theta),
        theta,
        kept_zeros: pairs(&reduced_problem.sigma.roots()),
        all_zeros: pairs(&problem.sigma.roots()),
        reduced_poles: pairs(&reduced.diagnostics.poles),
    })
}

fn polar_pair(r: f64, t: f64) -> [ComplexRepr; 2] {
    let z = Complex64::from_polar(r, t);
    [z.into(), z.conj().into()]
}

/// Ready-made inputs: `"system-identification"` (problem), `"degree-two"`
/// (scan), `"modified-zeros"` (scan) and `"degree-six"` (reduce).
pub fn preset_json(name: &str) -> Result<String, String> {
    let list = |zs: Vec<Complex64>| -> Vec<ComplexRepr> { zs.into_iter().map(Into::into).collect() };
    match name {
        "system-identification" => to_json(&ProblemFile::from_problem(&reference::system_identification())),
        "degree-two" | "modified-zeros" => {
            let extra: Vec<ComplexRepr> = if name == "modified-zeros" {
                polar_pair(0.6, 1.5).to_vec()
            } else {
                Vec::new()
            };
            to_json(&serde_json::json!({
                "sigma_roots": list(reference::degree_two_sigma().roots()),
                "a_roots": list(reference::degree_two_a().roots()),
                "extra_zeros": extra,
                "max_order": 6,
                "monte_carlo": false,
                "samples": 10000,
                "runs": 10,
                "seed": 1,
            }))
        }
        "degree-six" => {
            let poles = default_bank_poles(6, DEFAULT_BANK_RADIUS);
            let sigma = reference::model_reduction_sigma();
            let values = exact_values(&sigma, &reference::model_reduction_a(), &poles)
                .map_err(|e| e.to_string())?;
            let problem = bank_problem(&poles, values, sigma);
            to_json(&serde_json::json!({
                "problem": ProblemFile::from_problem(&problem),
                "target_degree": 4,
            }))
        }
        other => Err(format!("unknown preset {other:?}")),
    }
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn solve_problem(problem: &str) -> Result<String, JsError> {
    js(solve_json(problem))
}

#[wasm_bindgen]
pub fn degree_scan(input: &str) -> Result<String, JsError> {
    js(degree_scan_json(input))
}

#[wasm_bindgen]
pub fn reduce(input: &str) -> Result<String, JsError> {
    js(reduce_json(input))
}

#[wasm_bindgen]
pub fn preset(name: &str) -> Result<String, JsError> {
    js(preset_json(name))
}
