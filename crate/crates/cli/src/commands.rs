use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use nevpick::analysis::{spectral_density, theta_grid};
use nevpick::ingestion::{
    bank_problem, estimate_values, filter_bank, simulate_arma, FilterBankSpec,
};
use nevpick::io::{complex_list, ComplexRepr, ProblemFile, SolutionFile};
use nevpick::{
    estimate_positive_degree, monte_carlo, reduce_model, DegreeExperiment, Error,
    InterpolationProblem, ReductionSpec, Solution,
};

use crate::output::{num, prepare_dir, write_csv, write_json};
use crate::system::SystemFile;
use crate::{DetectArgs, ReduceArgs, SimulateArgs, SolveArgs};

const SPECTRUM_POINTS: usize = 512;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Input(PathBuf, std::io::Error),
    #[error("cannot parse {0}: {1}")]
    Parse(PathBuf, serde_json::Error),
    #[error("cannot write {0}: {1}")]
    Output(PathBuf, std::io::Error),
    #[error("cannot serialize output: {0}")]
    Serialize(String),
    #[error("{}", describe(.0))]
    Core(#[from] Error),
}

fn describe(e: &Error) -> String {
    match e {
        Error::Invalid(violations) => {
            let mut s = format!("invalid problem ({} violations):", violations.len());
            for v in violations {
                s.push_str(&format!("\n  - {v}"));
            }
            s
        }
        other => other.to_string(),
    }
}

/// Whether a library error comes from the input rather than the numerics.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NotMonic(_)
            | Error::Dimension(_)
            | Error::InvalidArgument(_)
            | Error::Invalid(_)
            | Error::NotHermitian(_)
            | Error::NotSchur(_)
            | Error::NotCovariance
            | Error::SplitConjugatePair(_)
            | Error::Parse(_)
            | Error::Json(_)
    )
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(..) | CliError::Parse(..) => 2,
            CliError::Output(..) | CliError::Serialize(_) => 1,
            CliError::Core(e) if is_input_error(e) => 2,
            CliError::Core(_) => 3,
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<(T, Value), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(path.to_path_buf(), e))?;
    let raw: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(path.to_path_buf(), e))?;
    let parsed =
        serde_json::from_value(raw.clone()).map_err(|e| CliError::Parse(path.to_path_buf(), e))?;
    Ok((parsed, raw))
}

fn config<A: Serialize>(command: &str, args: &A, input: &Value) -> Value {
    json!({ "command": command, "options": args, "input_document": input })
}

fn read_problem(path: &Path) -> Result<(InterpolationProblem, Value), CliError> {
    let (file, raw): (ProblemFile, Value) = read_json(path)?;
    Ok((file.to_problem()?, raw))
}

pub fn solve(args: &SolveArgs) -> Result<i32, CliError> {
    let (problem, raw) = read_problem(&args.io.input)?;
    let cfg = config("solve", args, &raw);
    let opts = args.solver.options();
    opts.check()?;
    let sol = nevpick::solve(&problem, &opts)?;
    let dir = &args.io.output;
    prepare_dir(dir)?;

    #[derive(Serialize)]
    struct Out {
        #[serde(flatten)]
        solution: SolutionFile,
        tau_rank: f64,
        estimated_degree: usize,
    }
    write_json(
        dir,
        "solution.json",
        &cfg,
        &Out {
            solution: SolutionFile::from_solution(&sol),
            tau_rank: args.tau_rank,
            estimated_degree: estimate_positive_degree(&sol.diagnostics.singular_values, args.tau_rank),
        },
    )?;
    write_trajectory(dir, &cfg, &sol)?;
    println!(
        "solved: {} accepted states, max |f(z_k) - w_k| = {:.3e}, rho = {:.6}",
        sol.trajectory.len(),
        sol.diagnostics.max_residual,
        sol.rho
    );
    Ok(0)
}

fn write_trajectory(dir: &Path, cfg: &Value, sol: &Solution) -> Result<(), CliError> {
    let n = sol.order();
    let mut header = vec!["nu".to_string()];
    header.extend((1..=n).map(|i| format!("p_{i}")));
    for i in 1..=n {
        header.push(format!("pole_re_{i}"));
        header.push(format!("pole_im_{i}"));
    }
    header.push("corrector_iters".into());
    let rows = sol.trajectory.iter().map(|s| {
        let mut row = vec![num(s.nu)];
        row.extend(s.p.iter().map(|&x| num(x)));
        for z in &s.poles {
            row.push(num(z.re));
            row.push(num(z.im));
        }
        row.push(s.corrector_iters.to_string());
        row
    });
    write_csv(dir, "trajectory.csv", cfg, &header, rows)?;
    Ok(())
}

pub fn simulate(args: &SimulateArgs) -> Result<i32, CliError> {
    let (file, raw): (SystemFile, Value) = read_json(&args.io.input)?;
    let cfg = config("simulate", args, &raw);
    let system = file.resolve()?;
    let s = &args.sampling;
    let bank = FilterBankSpec::new(system.bank_poles.clone(), s.samples, s.burn_in, s.seed);
    bank.validate_sampling()?;
    let y = simulate_arma(&system.sigma, &system.a, s.samples, s.burn_in, s.seed)?;
    let values = estimate_values(&filter_bank(&y, &bank.poles), &bank.poles);
    let problem = bank_problem(&bank.poles, values, system.sigma_hat.clone());
    let violations = problem.validate();

    let dir = &args.io.output;
    prepare_dir(dir)?;
    write_json(dir, "problem.json", &cfg, &ProblemFile::from_problem(&problem))?;
    write_csv(
        dir,
        "series.csv",
        &cfg,
        &["t".into(), "y".into()],
        y.iter().enumerate().map(|(t, v)| vec![t.to_string(), num(*v)]),
    )?;
    if violations.is_empty() {
        println!("simulated {} samples; problem validates", y.len());
    } else {
        // Still written so the caller can inspect it; a longer series usually fixes this.
        eprintln!("warning: the estimated problem does not validate:");
        for v in &violations {
            eprintln!("  - {v}");
        }
    }
    Ok(0)
}

pub fn detect_degree(args: &DetectArgs) -> Result<i32, CliError> {
    let (file, raw): (SystemFile, Value) = read_json(&args.io.input)?;
    let cfg = config("detect-degree", args, &raw);
    let system = file.resolve()?;
    let s = &args.sampling;
    let opts = args.solver.options();
    opts.check()?;
    if !(args.tau_rank > 0.0) {
        return Err(Error::InvalidArgument("tau-rank must be positive".into()).into());
    }
    if !system.a.is_schur() {
        return Err(Error::NotSchur(system.a.roots().iter().map(|z| z.norm()).fold(0.0, f64::max)).into());
    }
    let bank = FilterBankSpec::new(system.bank_poles.clone(), s.samples, s.burn_in, s.seed);
    let exp = DegreeExperiment {
        truth_sigma: system.sigma.clone(),
        truth_a: system.a.clone(),
        sigma_hat: system.sigma_hat.clone(),
        bank,
        runs: args.runs,
        variant: args.variant.into(),
        tau_rank: args.tau_rank,
        opts,
    };
    match exp.variant {
        nevpick::Variant::Exact => exp.bank.validate()?,
        nevpick::Variant::MonteCarlo => exp.bank.validate_sampling()?,
    }
    let report = monte_carlo(&exp);
    let total = exp.effective_runs();
    let ok = report.runs.len();

    #[derive(Serialize)]
    struct RunOut {
        run: usize,
        seed: u64,
        singular_values: Vec<f64>,
        poles: Vec<ComplexRepr>,
    }
    #[derive(Serialize)]
    struct FailOut {
        run: usize,
        seed: u64,
        error: String,
    }
    #[derive(Serialize)]
    struct Out {
        estimated_degree: usize,
        tau_rank: f64,
        mean_singular_values: Vec<f64>,
        runs_requested: usize,
        runs_succeeded: usize,
        runs: Vec<RunOut>,
        failures: Vec<FailOut>,
    }
    let out = Out {
        estimated_degree: report.estimated_degree,
        tau_rank: report.threshold,
        mean_singular_values: report.singular_values.clone(),
        runs_requested: total,
        runs_succeeded: ok,
        runs: report
            .run_indices
            .iter()
            .zip(&report.runs)
            .zip(&report.poles)
            .map(|((&run, sv), poles)| RunOut {
                run,
                seed: exp.run_seed(run),
                singular_values: sv.clone(),
                poles: complex_list(poles),
            })
            .collect(),
        failures: report
            .failures
            .iter()
            .map(|(run, e)| FailOut {
                run: *run,
                seed: exp.run_seed(*run),
                error: e.clone(),
            })
            .collect(),
    };
    let dir = &args.io.output;
    prepare_dir(dir)?;
    write_json(dir, "report.json", &cfg, &out)?;

    let n = exp.order();
    let mut header = vec!["run".to_string(), "seed".into(), "status".into()];
    header.extend((1..=n).map(|i| format!("s_{i}")));
    let mut rows: Vec<(usize, Vec<String>)> = out
        .runs
        .iter()
        .map(|r| {
            let mut row = vec![r.run.to_string(), r.seed.to_string(), "ok".into()];
            row.extend(r.singular_values.iter().map(|&x| num(x)));
            (r.run, row)
        })
        .collect();
    rows.extend(out.failures.iter().map(|f| {
        let mut row = vec![f.run.to_string(), f.seed.to_string(), format!("failed: {}", f.error)];
        row.extend(std::iter::repeat_n(String::new(), n));
        (f.run, row)
    }));
    rows.sort_by_key(|r| r.0);
    write_csv(dir, "runs.csv", &cfg, &header, rows.into_iter().map(|r| r.1))?;

    println!("estimated degree: {}", report.estimated_degree);
    println!("mean singular values: {:?}", report.singular_values);
    if ok < total {
        eprintln!("warning: {} of {total} runs failed", total - ok);
    }
    Ok(monte_carlo_exit(ok, total))
}

/// 0 when at least half of the runs succeeded, 4 when some did, 3 when none did.
pub fn monte_carlo_exit(succeeded: usize, total: usize) -> i32 {
    if 2 * succeeded >= total {
        0
    } else if succeeded > 0 {
        4
    } else {
        3
    }
}

pub fn reduce(args: &ReduceArgs) -> Result<i32, CliError> {
    let (problem, raw) = read_problem(&args.io.input)?;
    let cfg = config("reduce", args, &raw);
    let opts = args.solver.options();
    opts.check()?;
    let full = nevpick::solve(&problem, &opts)?;
    let spec = ReductionSpec {
        node_indices: None,
        opts,
    };
    let (reduced_problem, reduced) = reduce_model(&problem, &full, args.target_degree, &spec)?;
    let dir = &args.io.output;
    prepare_dir(dir)?;
    write_json(dir, "reduced_problem.json", &cfg, &ProblemFile::from_problem(&reduced_problem))?;
    write_json(dir, "reduced_solution.json", &cfg, &SolutionFile::from_solution(&reduced))?;
    let thetas = theta_grid(SPECTRUM_POINTS);
    let phi_full = spectral_density(&full, &thetas);
    let phi_reduced = spectral_density(&reduced, &thetas);
    write_csv(
        dir,
        "spectra.csv",
        &cfg,
        &["theta".into(), "phi_full".into(), "phi_reduced".into()],
        thetas
            .iter()
            .zip(phi_full.iter().zip(&phi_reduced))
            .map(|(t, (f, r))| vec![num(*t), num(*f), num(*r)]),
    )?;
    let dev = nevpick::analysis::log_spectral_deviation(&full, &reduced, &thetas);
    println!(
        "reduced degree {} -> {}; relative log-spectrum deviation {dev:.4}",
        problem.order(),
        reduced_problem.order()
    );
    Ok(0)
}
