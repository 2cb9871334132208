mod common;

use common::{c, random_problem, rng};
use nalgebra::{DMatrix, DVector};
use nevpick::cee::{build_t, build_v, build_w, compute_uu, compute_uu_dot, uu_from_covariance};
use nevpick::{CeeMatrices, Complex64, CovarianceFamily, OperatorFamily};
use proptest::prelude::*;
use rand::Rng;

fn normalized(seed: u64) -> (Vec<nevpick::Node>, Vec<Complex64>) {
    let mut r = rng(seed);
    let n = r.random_range(1..=6);
    let p = random_problem(seed, n).normalize().unwrap().problem;
    (p.nodes, p.values)
}

/// `V^-1 (W - I/2) V` in complex arithmetic, without any realification.
fn complex_t(v: &DMatrix<Complex64>, values: &[Complex64], nu: f64) -> DMatrix<Complex64> {
    let m = v.nrows();
    let w = DMatrix::from_diagonal(&DVector::from_iterator(
        m,
        values.iter().map(|w| (w - c(0.5, 0.0)) * nu),
    ));
    v.clone().try_inverse().unwrap() * w * v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn t_is_real_on_grid(seed in any::<u64>()) {
        let (nodes, values) = normalized(seed);
        let v = build_v(&nodes).unwrap();
        for k in 0..=10 {
            let nu = k as f64 / 10.0;
            let t = build_t(&v, &build_w(&values, nu)).unwrap();
            let tc = complex_t(&v, &values, nu);
            let im = tc.map(|z| z.im).amax();
            prop_assert!(im < 1e-10 * tc.map(|z| z.norm()).amax().max(1.0));
            prop_assert!((tc.map(|z| z.re) - &t).amax() < 1e-10 * t.amax().max(1.0));
        }
    }

    #[test]
    fn t_ignores_row_scaling(seed in any::<u64>()) {
        let (nodes, values) = normalized(seed);
        let v = build_v(&nodes).unwrap();
        let mut r = rng(seed ^ 7);
        let m = v.nrows();
        let d: Vec<Complex64> = (0..m)
            .map(|_| Complex64::from_polar(r.random_range(0.2..5.0), r.random_range(-3.0..3.0)))
            .collect();
        let scaled = DMatrix::from_diagonal(&DVector::from_vec(d)) * &v;
        let w = build_w(&values, 1.0);
        let t1 = build_t(&v, &w).unwrap();
        let t2 = build_t(&scaled, &w).unwrap();
        prop_assert!((&t1 - &t2).amax() < 1e-10 * t1.amax().max(1.0));
        let mut seven = v.clone();
        seven.row_mut(m - 1).scale_mut(7.0);
        prop_assert!((build_t(&seven, &w).unwrap() - &t1).amax() < 1e-12 * t1.amax().max(1.0));
    }

    #[test]
    fn uu_dot_matches_finite_differences(seed in any::<u64>()) {
        let (nodes, values) = normalized(seed);
        let cee = CeeMatrices::new(&nodes, &values).unwrap();
        for nu in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let h = 1e-6;
            let (up, bup) = compute_uu(&cee.t_at(nu + h)).unwrap();
            let (um, bum) = compute_uu(&cee.t_at(nu - h)).unwrap();
            let (ud, bud) = compute_uu_dot(&cee.t_at(nu), &cee.t_dot).unwrap();
            let fd_u = (up - um) / (2.0 * h);
            let fd_bu = (bup - bum) / (2.0 * h);
            prop_assert!((&fd_u - &ud).norm() <= 1e-6 * ud.norm().max(1.0));
            prop_assert!((&fd_bu - &bud).norm() <= 1e-6 * bud.norm().max(1.0));
            let pair = cee.pair(nu).unwrap();
            prop_assert!((&pair.u_dot - &ud).norm() < 1e-12 * ud.norm().max(1.0));
        }
    }

    #[test]
    fn t_is_affine_in_nu(seed in any::<u64>(), nu in 0.0..1.0f64) {
        let (nodes, values) = normalized(seed);
        let cee = CeeMatrices::new(&nodes, &values).unwrap();
        let v = build_v(&nodes).unwrap();
        let direct = build_t(&v, &build_w(&values, nu)).unwrap();
        prop_assert!((cee.t_at(nu) - &direct).amax() < 1e-10 * direct.amax().max(1.0));
        prop_assert!(cee.t_at(0.0).amax() == 0.0);
        let (u0, bu0) = compute_uu(&cee.t_at(0.0)).unwrap();
        prop_assert!(u0.amax() == 0.0 && bu0.amax() == 0.0);
    }
}

/// A positive definite Toeplitz sequence: autocovariances of a random stable AR(n).
fn random_covariances(seed: u64, n: usize) -> Vec<f64> {
    let mut r = rng(seed);
    let a = common::random_schur(&mut r, n, 0.8);
    let h = impulse_response(&[1.0], a.coeffs(), 4000);
    let gamma: Vec<f64> = (0..=n)
        .map(|k| h.iter().zip(&h[k..]).map(|(x, y)| x * y).sum())
        .collect();
    gamma.iter().map(|g| g / gamma[0]).collect()
}

/// Impulse response of `num(q^-1) / den(q^-1)` with both in ascending powers of `q^-1`.
fn impulse_response(num: &[f64], den: &[f64], len: usize) -> Vec<f64> {
    let mut h = vec![0.0; len];
    for t in 0..len {
        let mut acc = if t < num.len() { num[t] } else { 0.0 };
        for j in 1..den.len().min(t + 1) {
            acc -= den[j] * h[t - j];
        }
        h[t] = acc / den[0];
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn covariance_pair_inverts_the_series(seed in any::<u64>(), n in 1usize..=6) {
        let cov = random_covariances(seed, n);
        prop_assert!((cov[0] - 1.0).abs() < 1e-12);
        let (u, big_u) = uu_from_covariance(&cov).unwrap();
        // (1 - sum u_j x^j)(1 + sum c_i x^i) == 1 through order n.
        let mut lhs = vec![1.0];
        lhs.extend(u.iter().map(|x| -x));
        let rhs: Vec<f64> = cov.clone();
        let prod = common::convolve(&lhs, &rhs);
        for k in 1..=n {
            prop_assert!(prod[k].abs() < 1e-12, "order {k}: {}", prod[k]);
        }
        for i in 0..n {
            for j in i..n {
                prop_assert!(big_u[(i, j)] == 0.0);
            }
        }
    }

    #[test]
    fn covariance_family_derivatives(seed in any::<u64>(), n in 1usize..=5, nu in 0.05..0.95f64) {
        let fam = CovarianceFamily::new(random_covariances(seed, n)).unwrap();
        let h = 1e-6;
        let p = fam.pair(nu).unwrap();
        let a = fam.pair(nu + h).unwrap();
        let b = fam.pair(nu - h).unwrap();
        let fd_u = (a.u - b.u) / (2.0 * h);
        let fd_bu = (a.big_u - b.big_u) / (2.0 * h);
        prop_assert!((&fd_u - &p.u_dot).norm() <= 1e-6 * p.u_dot.norm().max(1.0));
        prop_assert!((&fd_bu - &p.big_u_dot).norm() <= 1e-6 * p.big_u_dot.norm().max(1.0));
    }
}

#[test]
fn first_order_series_expansion() {
    let (u, big_u) = uu_from_covariance(&[1.0, 0.4]).unwrap();
    assert!((u[0] - 0.4).abs() < 1e-15);
    assert_eq!(big_u[(0, 0)], 0.0);
}
