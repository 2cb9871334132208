mod common;

use common::c;
use nevpick::ingestion::{
    default_bank_poles, estimate_values, exact_values, filter_bank, simulate_arma, white_noise,
};
use nevpick::{monte_carlo, reference, Complex64, DegreeExperiment, Error, MonicPolynomial, Variant};
use std::f64::consts::PI;

/// Impulse response of `sigma(z) / a(z)` (both monic of equal degree).
fn impulse(sigma: &MonicPolynomial, a: &MonicPolynomial, len: usize) -> Vec<f64> {
    let (s, ac) = (sigma.coeffs(), a.coeffs());
    let mut h = vec![0.0; len];
    for t in 0..len {
        let mut acc = if t < s.len() { s[t] } else { 0.0 };
        for j in 1..ac.len().min(t + 1) {
            acc -= ac[j] * h[t - j];
        }
        h[t] = acc;
    }
    h
}

/// `f(1/p) = c_0 / 2 + sum_k c_k p^k` with `c_k` the autocovariances of the impulse response.
fn covariance_oracle(sigma: &MonicPolynomial, a: &MonicPolynomial, p: Complex64) -> Complex64 {
    let h = impulse(sigma, a, 4000);
    let mut f = c(0.0, 0.0);
    let mut pk = c(1.0, 0.0);
    for k in 0..600 {
        let ck: f64 = h.iter().zip(&h[k..]).map(|(x, y)| x * y).sum();
        f += pk * if k == 0 { ck / 2.0 } else { ck };
        pk *= p;
    }
    f
}

#[test]
fn all_pass_filter_returns_the_noise() {
    let sigma = reference::degree_two_a();
    let y = simulate_arma(&sigma, &sigma, 5000, 0, 9).unwrap();
    let e = white_noise(5000, 9);
    for (a, b) in y.iter().zip(&e) {
        assert!((a - b).abs() < 1e-12);
    }
    let y = simulate_arma(&sigma, &sigma, 100_000, 1000, 1).unwrap();
    let var = y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64;
    assert!((var - 1.0).abs() < 0.02, "{var}");
}

#[test]
fn simulation_is_deterministic_and_rejects_unstable_filters() {
    let s = reference::degree_two_sigma();
    let a = reference::degree_two_a();
    assert_eq!(simulate_arma(&s, &a, 1000, 100, 3).unwrap(), simulate_arma(&s, &a, 1000, 100, 3).unwrap());
    assert_ne!(simulate_arma(&s, &a, 1000, 100, 3).unwrap(), simulate_arma(&s, &a, 1000, 100, 4).unwrap());
    let unstable = MonicPolynomial::new(vec![1.0, -1.2]).unwrap();
    let one = MonicPolynomial::new(vec![1.0, 0.1]).unwrap();
    assert!(matches!(simulate_arma(&one, &unstable, 10, 0, 0), Err(Error::NotSchur(_))));
}

#[test]
fn periodogram_peaks_near_the_pole_angle() {
    let y = simulate_arma(&reference::degree_two_sigma(), &reference::degree_two_a(), 65_536, 1000, 11).unwrap();
    let seg = 512;
    let grid: Vec<f64> = (0..256).map(|k| PI * k as f64 / 256.0).collect();
    let mut avg = vec![0.0; grid.len()];
    for chunk in y.chunks_exact(seg) {
        for (g, &theta) in avg.iter_mut().zip(&grid) {
            let s: Complex64 = chunk
                .iter()
                .enumerate()
                .map(|(t, &v)| Complex64::from_polar(v, -theta * t as f64))
                .sum();
            *g += s.norm_sqr();
        }
    }
    let (k, _) = avg.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert!((grid[k] - 1.45).abs() < 0.1, "peak at {}", grid[k]);
}

#[test]
fn filter_bank_basics() {
    let y = [1.0, 0.0, 0.0, 0.0, 2.0];
    let out = filter_bank(&y, &[c(0.0, 0.0), c(0.5, 0.0), c(0.3, 0.4), c(0.3, -0.4)]);
    assert!(out[0].iter().zip(&y).all(|(u, v)| *u == c(*v, 0.0)));
    assert_eq!(&out[1][..4], &[c(1.0, 0.0), c(0.5, 0.0), c(0.25, 0.0), c(0.125, 0.0)]);
    assert!(out[2].iter().zip(&out[3]).all(|(x, y)| *x == y.conj()));
}

#[test]
fn exact_values_match_covariance_series() {
    let cases = [
        (reference::degree_two_sigma(), reference::degree_two_a()),
        (reference::model_reduction_sigma(), reference::model_reduction_a()),
    ];
    for (sigma, a) in cases {
        let poles = default_bank_poles(6, 0.7);
        let exact = exact_values(&sigma, &a, &poles).unwrap();
        for (p, w) in poles.iter().zip(&exact) {
            let oracle = covariance_oracle(&sigma, &a, *p);
            assert!((w - oracle).norm() < 1e-10 * oracle.norm().max(1.0), "{p}: {w} vs {oracle}");
        }
    }
}

#[test]
fn estimates_converge_to_exact_values() {
    let (sigma, a) = (reference::degree_two_sigma(), reference::degree_two_a());
    let poles = default_bank_poles(3, 0.7);
    let exact = exact_values(&sigma, &a, &poles).unwrap();
    let scale = 2.0 * exact[0].re;
    let n = 100_000;
    let y = simulate_arma(&sigma, &a, n, 1000, 5).unwrap();
    let est = estimate_values(&filter_bank(&y, &poles), &poles);
    for (e, w) in est.iter().zip(&exact) {
        assert!((e - w).norm() < 3.0 / (n as f64).sqrt() * scale, "{e} vs {w}");
    }
    // Conjugate closure is exact after symmetrization.
    for (k, p) in poles.iter().enumerate() {
        let l = poles.iter().position(|q| (q - p.conj()).norm() < 1e-14).unwrap();
        assert_eq!(est[k], est[l].conj());
    }
}

#[test]
fn white_noise_values_are_one_half() {
    let s = reference::degree_two_a();
    let poles = default_bank_poles(4, 0.7);
    let y = simulate_arma(&s, &s, 100_000, 1000, 8).unwrap();
    for w in estimate_values(&filter_bank(&y, &poles), &poles) {
        assert!((w - c(0.5, 0.0)).norm() < 0.02, "{w}");
    }
}

#[test]
fn estimate_error_decays_like_inverse_square_root() {
    let (sigma, a) = (reference::degree_two_sigma(), reference::degree_two_a());
    let poles = default_bank_poles(3, 0.7);
    let exact = exact_values(&sigma, &a, &poles).unwrap();
    let sizes = [1_000usize, 10_000, 100_000];
    let mut logs = Vec::new();
    for &n in &sizes {
        let mut mse = 0.0;
        let seeds = 40;
        for seed in 0..seeds {
            let y = simulate_arma(&sigma, &a, n, 1000, 1000 + seed).unwrap();
            let est = estimate_values(&filter_bank(&y, &poles), &poles);
            mse += est.iter().zip(&exact).map(|(e, w)| (e - w).norm_sqr()).sum::<f64>();
        }
        logs.push(((n as f64).ln(), (mse / seeds as f64).sqrt().ln()));
    }
    let mx = logs.iter().map(|l| l.0).sum::<f64>() / 3.0;
    let my = logs.iter().map(|l| l.1).sum::<f64>() / 3.0;
    let slope = logs.iter().map(|l| (l.0 - mx) * (l.1 - my)).sum::<f64>()
        / logs.iter().map(|l| (l.0 - mx).powi(2)).sum::<f64>();
    assert!((-0.6..=-0.4).contains(&slope), "slope {slope}");
}

#[test]
fn single_run_report_is_reproducible() {
    let exp = DegreeExperiment::padded(
        reference::degree_two_sigma(),
        reference::degree_two_a(),
        3,
        Variant::MonteCarlo,
        5_000,
        1,
        77,
    )
    .unwrap();
    let report = monte_carlo(&exp);
    let direct = exp.run_once(0).unwrap();
    assert_eq!(report.runs[0], direct.diagnostics.singular_values);
    assert_eq!(report, monte_carlo(&exp));
}
