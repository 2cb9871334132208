//! Post-solve analysis: singular values of `P`, positive-degree estimation,
//! dominant-zero model reduction, and spectral densities.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::continuation::{solve, SolveOptions, Solution};
use crate::error::{Error, Result};
use crate::polyalg::MonicPolynomial;
use crate::problem::{InterpolationProblem, Node};

pub const DEFAULT_TAU_RANK: f64 = 1e-2;
/// Imaginary parts below this count as real when grouping conjugate pairs.
const REAL_AXIS_TOL: f64 = 1e-10;
/// Relative difference below which two sort keys count as a tie.
const TIE_TOL: f64 = 1e-9;

/// Singular values, largest first.
pub fn singular_values(p: &DMatrix<f64>) -> Vec<f64> {
    if p.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = p.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values at or above `tau_rank * svals[0]`.
pub fn estimate_positive_degree(svals: &[f64], tau_rank: f64) -> usize {
    match svals.first() {
        Some(&s1) if s1 > 0.0 => svals.iter().filter(|&&s| s >= tau_rank * s1).count(),
        _ => 0,
    }
}

/// What a degree-detection run keeps from its solution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub singular_values: Vec<f64>,
    /// Roots of the solved `a`.
    pub poles: Vec<Complex64>,
}

impl RunSummary {
    pub fn from_solution(s: &Solution) -> Self {
        Self {
            singular_values: s.diagnostics.singular_values.clone(),
            poles: s.diagnostics.poles.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeReport {
    /// Mean singular values over successful runs (single run: that run's values).
    pub singular_values: Vec<f64>,
    pub estimated_degree: usize,
    pub threshold: f64,
    /// Per-run singular values for the successful runs, in run order.
    pub runs: Vec<Vec<f64>>,
    /// Per-run poles of the solved interpolant, aligned with `runs`.
    pub poles: Vec<Vec<Complex64>>,
    pub run_indices: Vec<usize>,
    pub failures: Vec<(usize, String)>,
}

impl DegreeReport {
    pub fn from_runs(results: Vec<(usize, Result<RunSummary>)>, tau_rank: f64) -> Self {
        let mut runs = Vec::new();
        let mut poles = Vec::new();
        let mut run_indices = Vec::new();
        let mut failures = Vec::new();
        for (i, r) in results {
            match r {
                Ok(summary) => {
                    runs.push(summary.singular_values);
                    poles.push(summary.poles);
                    run_indices.push(i);
                }
                Err(e) => failures.push((i, e.to_string())),
            }
        }
        let len = runs.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; len];
        for sv in &runs {
            for (m, s) in mean.iter_mut().zip(sv) {
                *m += s / runs.len() as f64;
            }
        }
        Self {
            estimated_degree: estimate_positive_degree(&mean, tau_rank),
            singular_values: mean,
            threshold: tau_rank,
            runs,
            poles,
            run_indices,
            failures,
        }
    }
}

/// `Phi(e^{i theta}) = scale * rho^2 |sigma|^2 / |a|^2`, which equals `2 Re f(e^{i theta})`.
pub fn spectral_density(solution: &Solution, thetas: &[f64]) -> Vec<f64> {
    let k = solution.scale * solution.rho * solution.rho;
    thetas
        .iter()
        .map(|&t| {
            let z = Complex64::from_polar(1.0, t);
            k * solution.sigma.eval(z).norm_sqr() / solution.a.eval(z).norm_sqr()
        })
        .collect()
}

/// `n` equally spaced angles covering `[-pi, pi)`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| -PI + 2.0 * PI * k as f64 / n as f64).collect()
}

/// `||log Phi_r - log Phi_f||_2 / ||log Phi_f||_2` over `thetas`.
pub fn log_spectral_deviation(full: &Solution, reduced: &Solution, thetas: &[f64]) -> f64 {
    let f = spectral_density(full, thetas);
    let r = spectral_density(reduced, thetas);
    let num: f64 = f.iter().zip(&r).map(|(a, b)| (b.ln() - a.ln()).powi(2)).sum();
    let den: f64 = f.iter().map(|a| a.ln().powi(2)).sum();
    (num / den).sqrt()
}

/// Groups of indices forming conjugate pairs (or singletons for real points).
fn conjugate_groups(points: &[Complex64]) -> Result<Vec<Vec<usize>>> {
    let mut used = vec![false; points.len()];
    let mut groups = Vec::new();
    for i in 0..points.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = points[i];
        if z.im.abs() <= REAL_AXIS_TOL * z.norm().max(1.0) {
            groups.push(vec![i]);
            continue;
        }
        let partner = (0..points.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                (points[a] - z.conj())
                    .norm()
                    .total_cmp(&(points[b] - z.conj()).norm())
            })
            .filter(|&j| (points[j] - z.conj()).norm() <= 1e-8 * z.norm().max(1.0))
            .ok_or_else(|| Error::SplitConjugatePair(format!("{z} has no conjugate partner")))?;
        used[partner] = true;
        groups.push(vec![i, partner]);
    }
    Ok(groups)
}

/// Takes the first `m` points in the order given by `key` (descending), never
/// splitting a conjugate pair.
fn select_groups<K>(points: &[Complex64], m: usize, what: &str, key: K) -> Result<Vec<usize>>
where
    K: Fn(Complex64) -> f64,
{
    let mut groups = conjugate_groups(points)?;
    let rep = |g: &Vec<usize>| points[g[0]];
    groups.sort_by(|a, b| {
        let (ka, kb) = (key(rep(a)), key(rep(b)));
        let by_key = if (ka - kb).abs() <= TIE_TOL * ka.abs().max(kb.abs()).max(1.0) {
            Ordering::Equal
        } else {
            kb.partial_cmp(&ka).unwrap_or(Ordering::Equal)
        };
        by_key.then(rep(a).arg().abs().total_cmp(&rep(b).arg().abs()))
    });
    let mut out = Vec::with_capacity(m);
    for g in groups {
        if out.len() == m {
            break;
        }
        if out.len() + g.len() > m {
            return Err(Error::SplitConjugatePair(format!(
                "keeping {m} {what} would separate {} from {}",
                points[g[0]],
                points[g[1]]
            )));
        }
        out.extend(g);
    }
    if out.len() < m {
        return Err(Error::InvalidArgument(format!(
            "only {} {what} available, {m} requested",
            out.len()
        )));
    }
    Ok(out)
}

/// The `m` spectral zeros of largest modulus (ties: smaller |angle| first).
pub fn dominant_zeros(zeros: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    let idx = select_groups(zeros, m, "spectral zeros", |z| z.norm())?;
    Ok(idx.into_iter().map(|i| zeros[i]).collect())
}

/// Which interpolation conditions the reduced problem keeps.
#[derive(Clone, Debug, Default)]
pub struct ReductionSpec {
    /// Finite node indices to keep alongside the node at infinity. `None`
    /// keeps the `m` nodes of largest modulus (smallest filter-bank pole).
    pub node_indices: Option<Vec<usize>>,
    pub opts: SolveOptions,
}

/// Order-`m` problem using the dominant spectral zeros and a subset of nodes.
pub fn reduced_problem(
    problem: &InterpolationProblem,
    m: usize,
    spec: &ReductionSpec,
) -> Result<InterpolationProblem> {
    let n = problem.order();
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "target degree must be in 1..={n}, got {m}"
        )));
    }
    if m == n {
        return Ok(problem.clone());
    }
    let zeros = problem.sigma.roots();
    let kept_zeros = dominant_zeros(&zeros, m)?;
    let sigma = MonicPolynomial::from_roots(&kept_zeros)?;

    let finite: Vec<Complex64> = problem.nodes[1..]
        .iter()
        .map(|z| match z {
            Node::Finite(z) => *z,
            Node::Infinity => Complex64::new(f64::INFINITY, 0.0),
        })
        .collect();
    let mut keep: Vec<usize> = match &spec.node_indices {
        Some(idx) => {
            if idx.len() != m || idx.iter().any(|&i| i == 0 || i > n) {
                return Err(Error::InvalidArgument(format!(
                    "need {m} distinct finite node indices in 1..={n}"
                )));
            }
            idx.clone()
        }
        None => select_groups(&finite, m, "interpolation nodes", |z| z.norm())?
            .into_iter()
            .map(|i| i + 1)
            .collect(),
    };
    keep.sort_unstable();
    keep.dedup();
    if keep.len() != m {
        return Err(Error::InvalidArgument("node indices must be distinct".into()));
    }
    let mut nodes = vec![problem.nodes[0]];
    let mut values = vec![problem.values[0]];
    for i in keep {
        nodes.push(problem.nodes[i]);
        values.push(problem.values[i]);
    }
    Ok(InterpolationProblem::new(nodes, values, sigma))
}

/// Keeps the `m` dominant spectral zeros and re-solves at order `m`.
pub fn reduce_model(
    problem: &InterpolationProblem,
    solution: &Solution,
    m: usize,
    spec: &ReductionSpec,
) -> Result<(InterpolationProblem, Solution)> {
    if m == problem.order() {
        return Ok((problem.clone(), solution.clone()));
    }
    let reduced = reduced_problem(problem, m, spec)?;
    let sol = solve(&reduced, &spec.opts)?;
    Ok((reduced, sol))
}
