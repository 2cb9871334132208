//! Solves the 8-point system-identification instance and prints the interpolant.

use nevpick::{reference, solve, SolveOptions};

fn main() {
    let problem = reference::system_identification();
    let t = std::time::Instant::now();
    let sol = solve(&problem, &SolveOptions::default()).expect("solve");
    println!("solved in {:?} ({} accepted states)", t.elapsed(), sol.trajectory.len());
    println!("a   = {:?}", sol.a.coeffs());
    println!("b   = {:?}", sol.b.coeffs());
    println!("rho = {:.6}", sol.rho);
    println!("max |f(z_k) - w_k| = {:.2e}", sol.diagnostics.max_residual);
    let moduli: Vec<f64> = sol.diagnostics.poles.iter().map(|p| p.norm()).collect();
    println!("pole moduli = {moduli:.6?}");
    println!("singular values of P = {:.4?}", sol.diagnostics.singular_values);
}
