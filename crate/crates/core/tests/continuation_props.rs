mod common;

use common::{c, convolve, durand_kerner, random_problem, rng};
use nalgebra::DVector;
use nevpick::continuation::{corrector, follow_path, Homotopy};
use nevpick::{
    solve, solve_family, CeeMatrices, CovarianceFamily, Error, InterpolationProblem,
    MonicPolynomial, Node, SolveOptions,
};
use proptest::prelude::*;
use rand::Rng;

fn homotopy_parts(problem: &InterpolationProblem) -> (CeeMatrices, MonicPolynomial) {
    let norm = problem.normalize().unwrap().problem;
    (CeeMatrices::new(&norm.nodes, &norm.values).unwrap(), norm.sigma)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn g_matches_convolution_oracle(seed in any::<u64>(), nu in 0.0..1.0f64) {
        let mut r = rng(seed);
        let n = r.random_range(1..=6);
        let problem = random_problem(seed, n);
        let (cee, sigma) = homotopy_parts(&problem);
        let hom = Homotopy::new(&sigma, &cee).unwrap();
        let slice = hom.slice(nu).unwrap();
        let p = DVector::from_fn(n, |_, _| r.random_range(-0.5..0.5));
        let (a, b) = slice.ab(&p);
        // a(z) b(1/z) + b(z) a(1/z) - 2 rho^2 sigma(z) sigma(1/z), read off by convolution.
        let rev = |v: &[f64]| v.iter().rev().copied().collect::<Vec<_>>();
        let ab = convolve(a.coeffs(), &rev(b.coeffs()));
        let ba = convolve(b.coeffs(), &rev(a.coeffs()));
        let ss = convolve(sigma.coeffs(), &rev(sigma.coeffs()));
        let g = slice.eval_g(&p);
        for k in 0..n {
            let oracle = ab[n + k] + ba[n + k] - 2.0 * (1.0 - p[0]) * ss[n + k];
            prop_assert!((oracle - g[k]).abs() < 1e-12 * (1.0 + oracle.abs()));
        }
    }
}

#[test]
fn poles_stay_inside_the_disk_along_the_path() {
    for k in 0..15u64 {
        let n = 2 + (k % 5) as usize;
        let problem = random_problem(300 + k, n);
        let (cee, sigma) = homotopy_parts(&problem);
        let hom = Homotopy::new(&sigma, &cee).unwrap();
        let states = follow_path(&hom, &SolveOptions::default()).unwrap();
        assert_eq!(states.last().unwrap().nu, 1.0);
        let mut prev_nu = -1.0;
        for s in &states {
            assert!(s.nu > prev_nu);
            prev_nu = s.nu;
            assert!(s.residual <= 1e-12);
            let (a, _) = hom.slice(s.nu).unwrap().ab(&DVector::from_column_slice(&s.p));
            let roots = durand_kerner(a.coeffs());
            assert!(roots.iter().all(|z| z.norm() < 1.0), "nu {}: {roots:?}", s.nu);
        }
    }
}

#[test]
fn solves_are_deterministic() {
    let problem = random_problem(42, 5);
    let a = solve(&problem, &SolveOptions::default()).unwrap();
    let b = solve(&problem, &SolveOptions::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn interpolant_is_positive_real_on_the_circle() {
    for k in 0..10u64 {
        let sol = solve(&random_problem(800 + k, 1 + k as usize % 6), &SolveOptions::default()).unwrap();
        for theta in nevpick::analysis::theta_grid(64) {
            assert!(sol.eval_at(nevpick::Complex64::from_polar(1.0, theta)).re > 0.0);
        }
    }
}

#[test]
fn corrector_converges_quadratically() {
    let problem = random_problem(17, 4);
    let (cee, sigma) = homotopy_parts(&problem);
    let hom = Homotopy::new(&sigma, &cee).unwrap();
    let sol = solve(&problem, &SolveOptions::default()).unwrap();
    let p = DVector::from_column_slice(&sol.p);
    let start = &p + DVector::from_element(4, 1e-3);
    let out = corrector(&hom.slice(1.0).unwrap(), &start, &SolveOptions::default()).unwrap();
    assert!((&out.p - &p).amax() < 1e-10);
    let h = &out.history;
    // Once in the basin the error roughly squares each step.
    assert!(h.len() >= 3);
    for w in h.windows(2).take(2) {
        assert!(w[1] < w[0].powf(1.5) * 10.0, "{h:?}");
    }
}

#[test]
fn covariance_extension_reproduces_the_covariances() {
    for (k, n) in [(0u64, 1usize), (1, 2), (2, 3), (3, 4)] {
        let mut r = rng(k);
        let ar = common::random_schur(&mut r, n, 0.7);
        // Covariances of 1/ar(z) driven by white noise, normalized to c0 = 1.
        let mut h = vec![0.0; 3000];
        for t in 0..h.len() {
            let mut acc = if t == 0 { 1.0 } else { 0.0 };
            for j in 1..=n.min(t) {
                acc -= ar.coeffs()[j] * h[t - j];
            }
            h[t] = acc;
        }
        let gamma: Vec<f64> = (0..=n).map(|k| h.iter().zip(&h[k..]).map(|(x, y)| x * y).sum()).collect();
        let cov: Vec<f64> = gamma.iter().map(|g| g / gamma[0]).collect();
        let sigma = common::random_schur(&mut r, n, 0.8);
        let fam = CovarianceFamily::new(cov.clone()).unwrap();
        let sol = solve_family(&sigma, &fam, &SolveOptions::default()).unwrap();
        // f(z) = b(z) / (2 a(z)) = c0/2 + c1 z^-1 + ...: divide the reversed series.
        let (a, b) = (sol.a.coeffs(), sol.b.coeffs());
        let mut q = vec![0.0; n + 1];
        for t in 0..=n {
            let mut acc = b[t];
            for j in 1..=t {
                acc -= a[j] * q[t - j];
            }
            q[t] = acc;
        }
        assert!((q[0] / 2.0 - 0.5).abs() < 1e-12);
        for t in 1..=n {
            assert!((q[t] / 2.0 - cov[t]).abs() < 1e-10, "n={n} t={t}: {} vs {}", q[t] / 2.0, cov[t]);
        }
        assert!(sol.diagnostics.cee_residual < 1e-8);
    }
}

#[test]
fn rejects_invalid_problems_and_options() {
    let mut problem = random_problem(3, 2);
    problem.nodes[1] = Node::Finite(c(0.5, 0.0));
    assert!(matches!(solve(&problem, &SolveOptions::default()), Err(Error::Invalid(_))));

    let problem = random_problem(3, 2);
    let bad = SolveOptions { mu: 0.0, ..SolveOptions::default() };
    assert!(matches!(solve(&problem, &bad), Err(Error::InvalidArgument(_))));

    let starved = SolveOptions { mu: 1e-30, step_min: 1e-2, ..SolveOptions::default() };
    assert!(matches!(solve(&problem, &starved), Err(Error::StepUnderflow { .. })));
}
