#![allow(dead_code)]

use nevpick::ingestion::exact_values;
use nevpick::{Complex64, InterpolationProblem, MonicPolynomial, Node};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Conjugate-closed random points with moduli in `[rmin, rmax]`.
pub fn random_conjugate_set(rng: &mut ChaCha8Rng, n: usize, rmin: f64, rmax: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n);
    while out.len() + 2 <= n {
        let r = rng.random_range(rmin..rmax);
        let t = rng.random_range(0.15..PI - 0.15);
        let z = Complex64::from_polar(r, t);
        out.push(z);
        out.push(z.conj());
    }
    if out.len() < n {
        let r = rng.random_range(rmin..rmax);
        out.push(c(if rng.random_bool(0.5) { r } else { -r }, 0.0));
    }
    out
}

pub fn random_schur(rng: &mut ChaCha8Rng, n: usize, rmax: f64) -> MonicPolynomial {
    MonicPolynomial::from_roots(&random_conjugate_set(rng, n, 0.05, rmax)).unwrap()
}

/// A random order-`n` problem whose values come from a random strictly positive
/// real function of degree `n`, plus independently random spectral zeros.
pub fn random_problem(seed: u64, n: usize) -> InterpolationProblem {
    let mut r = rng(seed);
    let truth_a = random_schur(&mut r, n, 0.85);
    let truth_sigma = random_schur(&mut r, n, 0.85);
    let inv_nodes = random_conjugate_set(&mut r, n, 0.3, 0.8);
    let mut poles = vec![c(0.0, 0.0)];
    poles.extend(inv_nodes);
    let values = exact_values(&truth_sigma, &truth_a, &poles).unwrap();
    let scale = r.random_range(0.5..2.0);
    let nodes = poles
        .iter()
        .map(|p| if p.norm() == 0.0 { Node::Infinity } else { Node::Finite(p.inv()) })
        .collect();
    let sigma = random_schur(&mut r, n, 0.9);
    InterpolationProblem::new(nodes, values.into_iter().map(|w| w * scale).collect(), sigma)
}

/// Durand-Kerner iteration, independent of the companion-matrix route.
pub fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().fold(c(0.0, 0.0), |acc, &k| acc * z + k);
    let seed = c(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = c(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Greedy multiset match; returns the largest pairing distance.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Plain truncated convolution of two coefficient vectors in ascending powers.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
