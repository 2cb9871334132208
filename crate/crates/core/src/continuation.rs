//! Homotopy `G(p, nu)` and its Euler-predictor / Newton-corrector path follower.
//!
//! Along the path, `p = P h` determines the pair of monic polynomials
//! `a = x - g`, `b = x + g` with `x = Gamma p + sigma` and `g = u + U x`, and
//! `G(p, nu) = E S(a) [1; b] - 2 (1 - h'p) d` collects the first `n`
//! coefficients of `a(z) b(1/z) + b(z) a(1/z) - 2 rho^2 sigma(z) sigma(1/z)`.
//! The start `(p, nu) = (0, 0)` is exact since `u = U = 0` there.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::singular_values;
use crate::cee::{cee_residual, g_of_p, recover_p, CeeMatrices, OperatorFamily, OperatorPair};
use crate::error::{Error, Result};
use crate::polyalg::{
    build_d, build_s, companion, eval_reversed, max_modulus, sym_coeffs, CompanionData,
    MonicPolynomial,
};
use crate::problem::{InterpolationProblem, Node};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveOptions {
    /// Band for the first component of `G` at a predicted point.
    pub mu: f64,
    /// Infinity-norm stop for the corrector.
    pub tol_corrector: f64,
    pub max_newton_iters: usize,
    pub step_init: f64,
    pub step_max: f64,
    pub step_growth: f64,
    pub step_min: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            mu: 1e-4,
            tol_corrector: 1e-12,
            max_newton_iters: 25,
            step_init: 0.1,
            step_max: 0.2,
            step_growth: 1.5,
            step_min: 1e-8,
        }
    }
}

impl SolveOptions {
    pub fn check(&self) -> Result<()> {
        let positive = [
            ("mu", self.mu),
            ("tol_corrector", self.tol_corrector),
            ("step_init", self.step_init),
            ("step_max", self.step_max),
            ("step_min", self.step_min),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.step_growth >= 1.0) {
            return Err(Error::InvalidArgument("step_growth must be at least 1".into()));
        }
        if self.max_newton_iters == 0 {
            return Err(Error::InvalidArgument("max_newton_iters must be positive".into()));
        }
        Ok(())
    }
}

/// One accepted point on the path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuationState {
    pub nu: f64,
    pub p: Vec<f64>,
    /// The step that led to this state (0 for the start).
    pub step: f64,
    pub corrector_iters: usize,
    pub residual: f64,
    /// Roots of `a(z)` at this state.
    #[serde(skip)]
    pub poles: Vec<Complex64>,
}

/// Problem-independent pieces of the homotopy: companion data, `d`, and the operator family.
pub struct Homotopy<'f> {
    pub sigma: MonicPolynomial,
    pub comp: CompanionData,
    pub d: DVector<f64>,
    family: &'f dyn OperatorFamily,
}

impl<'f> Homotopy<'f> {
    pub fn new(sigma: &MonicPolynomial, family: &'f dyn OperatorFamily) -> Result<Self> {
        if sigma.degree() != family.order() {
            return Err(Error::Dimension(format!(
                "sigma has degree {} but the operator family has order {}",
                sigma.degree(),
                family.order()
            )));
        }
        if sigma.degree() == 0 {
            return Err(Error::InvalidArgument("order must be at least 1".into()));
        }
        Ok(Self {
            sigma: sigma.clone(),
            comp: companion(sigma),
            d: build_d(sigma),
            family,
        })
    }

    pub fn order(&self) -> usize {
        self.d.len()
    }

    pub fn family(&self) -> &dyn OperatorFamily {
        self.family
    }

    /// The homotopy frozen at `nu`.
    pub fn slice(&self, nu: f64) -> Result<Slice<'_>> {
        Ok(Slice {
            pair: self.family.pair(nu)?,
            comp: &self.comp,
            d: &self.d,
        })
    }

    pub fn slice_with(&self, pair: OperatorPair) -> Slice<'_> {
        Slice {
            pair,
            comp: &self.comp,
            d: &self.d,
        }
    }
}

/// `G(., nu)` and its derivatives at a fixed `nu`.
pub struct Slice<'h> {
    pub pair: OperatorPair,
    comp: &'h CompanionData,
    d: &'h DVector<f64>,
}

fn with_leading(lead: f64, v: &DVector<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push(lead);
    out.extend(v.iter());
    out
}

/// `[0; M]` as an `(n+1) x n` matrix.
fn pad_top(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.nrows() + 1, m.ncols());
    out.view_mut((1, 0), (m.nrows(), m.ncols())).copy_from(m);
    out
}

impl Slice<'_> {
    pub fn nu(&self) -> f64 {
        self.pair.nu
    }

    fn x(&self, p: &DVector<f64>) -> DVector<f64> {
        &self.comp.gamma * p + &self.comp.sigma_vec
    }

    pub fn g(&self, p: &DVector<f64>) -> DVector<f64> {
        g_of_p(&self.pair, self.comp, p)
    }

    /// `a = (I - U)(Gamma p + sigma) - u`, `b = (I + U)(Gamma p + sigma) + u`.
    pub fn ab(&self, p: &DVector<f64>) -> (MonicPolynomial, MonicPolynomial) {
        let x = self.x(p);
        let g = &self.pair.u + &self.pair.big_u * &x;
        let a = MonicPolynomial::from_tail((&x - &g).as_slice());
        let b = MonicPolynomial::from_tail((&x + &g).as_slice());
        (a, b)
    }

    pub fn eval_g(&self, p: &DVector<f64>) -> DVector<f64> {
        let n = self.d.len();
        let (a, b) = self.ab(p);
        let s = sym_coeffs(a.coeffs(), b.coeffs()).expect("equal lengths");
        let rho2 = 1.0 - p[0];
        DVector::from_fn(n, |k, _| s[k] - 2.0 * rho2 * self.d[k])
    }

    /// `dG/dp = -2 E S([0; g]) [0; U Gamma] + 2 E S([1; x]) [0; Gamma] + 2 d h'`.
    pub fn jac_g(&self, p: &DVector<f64>) -> DMatrix<f64> {
        let n = self.d.len();
        let x = self.x(p);
        let g = self.g(p);
        let s_g = build_s(&with_leading(0.0, &g));
        let s_x = build_s(&with_leading(1.0, &x));
        let ug = pad_top(&(&self.pair.big_u * &self.comp.gamma));
        let gam = pad_top(&self.comp.gamma);
        let full = s_x * gam * 2.0 - s_g * ug * 2.0;
        let mut j = full.rows(0, n).into_owned();
        for k in 0..n {
            j[(k, 0)] += 2.0 * self.d[k];
        }
        j
    }

    /// `dG/dnu = -2 E S([0; g]) [0; U' x + u']`.
    pub fn dg_dnu(&self, p: &DVector<f64>) -> DVector<f64> {
        let n = self.d.len();
        let x = self.x(p);
        let g = self.g(p);
        let dg = &self.pair.big_u_dot * &x + &self.pair.u_dot;
        let s_g = build_s(&with_leading(0.0, &g));
        let full = s_g * DVector::from_vec(with_leading(0.0, &dg)) * -2.0;
        full.rows(0, n).into_owned()
    }

    /// Tangent `dp/dnu = -(dG/dp)^-1 dG/dnu`.
    pub fn tangent(&self, p: &DVector<f64>) -> Result<DVector<f64>> {
        let rhs = -self.dg_dnu(p);
        self.jac_g(p)
            .lu()
            .solve(&rhs)
            .ok_or(Error::Singular("homotopy Jacobian"))
    }
}

/// Euler step `p + step * dp/dnu`.
pub fn predictor(slice: &Slice<'_>, p: &DVector<f64>, step: f64) -> Result<DVector<f64>> {
    Ok(p + slice.tangent(p)? * step)
}

/// Newton iterates of a corrector run.
#[derive(Clone, Debug)]
pub struct CorrectorOutcome {
    pub p: DVector<f64>,
    pub iters: usize,
    pub residual: f64,
    /// Infinity-norm residual before each iteration and after the last.
    pub history: Vec<f64>,
}

/// Newton's method on `G(., nu) = 0` from `p_hat`.
pub fn corrector(
    slice: &Slice<'_>,
    p_hat: &DVector<f64>,
    opts: &SolveOptions,
) -> Result<CorrectorOutcome> {
    let mut p = p_hat.clone();
    let mut history = Vec::new();
    for iters in 0..=opts.max_newton_iters {
        let r = slice.eval_g(&p);
        let res = r.amax();
        history.push(res);
        if !res.is_finite() {
            return Err(Error::CorrectorDiverged {
                iters,
                residual: res,
            });
        }
        if res <= opts.tol_corrector {
            return Ok(CorrectorOutcome {
                p,
                iters,
                residual: res,
                history,
            });
        }
        if iters == opts.max_newton_iters {
            break;
        }
        let delta = slice
            .jac_g(&p)
            .lu()
            .solve(&r)
            .ok_or(Error::Singular("homotopy Jacobian"))?;
        p -= delta;
    }
    Err(Error::CorrectorDiverged {
        iters: opts.max_newton_iters,
        residual: *history.last().unwrap_or(&f64::NAN),
    })
}

/// Follows `G(p(nu), nu) = 0` from `(0, 0)` to `nu = 1`. Returns the accepted states.
pub fn follow_path(homotopy: &Homotopy<'_>, opts: &SolveOptions) -> Result<Vec<ContinuationState>> {
    opts.check()?;
    let n = homotopy.order();
    let mut p = DVector::<f64>::zeros(n);
    let start = homotopy.slice(0.0)?;
    let start_res = start.eval_g(&p).amax();
    let start_poles = start.ab(&p).0.roots();
    let mut states = vec![ContinuationState {
        nu: 0.0,
        p: p.as_slice().to_vec(),
        step: 0.0,
        corrector_iters: 0,
        residual: start_res,
        poles: start_poles,
    }];
    if homotopy.family().is_constant() {
        return Ok(states);
    }

    let mut nu = 0.0;
    let mut step = opts.step_init.min(opts.step_max);
    let mut here = start;
    while nu < 1.0 {
        let tangent = here.tangent(&p).ok();
        let mut accepted = None;
        while accepted.is_none() {
            if step < opts.step_min {
                return Err(Error::StepUnderflow {
                    nu,
                    step_min: opts.step_min,
                });
            }
            let h = step.min(1.0 - nu);
            let nu_next = if 1.0 - (nu + h) < 1e-14 { 1.0 } else { nu + h };
            let h = nu_next - nu;
            let attempt = (|| -> Result<Option<_>> {
                let Some(t) = tangent.as_ref() else {
                    return Ok(None);
                };
                let p_hat = &p + t * h;
                let next = homotopy.slice(nu_next)?;
                let lead = next.eval_g(&p_hat)[0];
                if !(lead.abs() <= opts.mu) {
                    return Ok(None);
                }
                let out = corrector(&next, &p_hat, opts)?;
                let (a, _) = next.ab(&out.p);
                let poles = a.roots();
                if !(out.p[0] < 1.0) || !(max_modulus(&poles) < 1.0) {
                    return Ok(None);
                }
                Ok(Some((next, out, poles, h)))
            })();
            match attempt {
                Ok(Some(found)) => accepted = Some(found),
                Ok(None) | Err(_) => step = h / 2.0,
            }
        }
        let (next, out, poles, h) = accepted.expect("loop exits only on acceptance");
        nu = next.nu();
        p = out.p;
        states.push(ContinuationState {
            nu,
            p: p.as_slice().to_vec(),
            step: h,
            corrector_iters: out.iters,
            residual: out.residual,
            poles,
        });
        here = next;
        step = (h * opts.step_growth).min(opts.step_max);
    }
    Ok(states)
}

/// Post-solve diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// `|f(z_k) - w_k|` for every node, against the original values.
    pub node_residuals: Vec<f64>,
    pub max_residual: f64,
    /// Roots of `a`, the poles of `f`.
    pub poles: Vec<Complex64>,
    /// Roots of `b`, the zeros of `f`.
    pub zeros: Vec<Complex64>,
    /// Roots of `sigma`.
    pub spectral_zeros: Vec<Complex64>,
    pub cee_residual: f64,
    pub singular_values: Vec<f64>,
    /// 2-norm condition number of the scaled Vandermonde matrix (0 when not applicable).
    pub v_condition: f64,
}

/// Interpolant `f(z) = scale * b(z) / (2 a(z))` with its CEE certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub a: MonicPolynomial,
    pub b: MonicPolynomial,
    pub sigma: MonicPolynomial,
    pub rho: f64,
    pub p_matrix: DMatrix<f64>,
    pub p: Vec<f64>,
    pub scale: f64,
    pub trajectory: Vec<ContinuationState>,
    pub diagnostics: Diagnostics,
}

impl Solution {
    /// `f` at a node; `scale / 2` at infinity.
    pub fn eval(&self, z: Node) -> Complex64 {
        let x = z.inv();
        let ratio = eval_reversed(self.b.coeffs(), x) / eval_reversed(self.a.coeffs(), x);
        ratio * (0.5 * self.scale)
    }

    /// `f` at a finite point.
    pub fn eval_at(&self, z: Complex64) -> Complex64 {
        self.eval(Node::Finite(z))
    }

    pub fn order(&self) -> usize {
        self.a.degree()
    }

    /// Same interpolant expressed for values scaled by `scale`.
    pub fn denormalize(mut self, scale: f64) -> Self {
        self.scale *= scale;
        self
    }
}

/// Runs the path follower and builds `P`, `a`, `b`, `rho` from its endpoint
/// (normalized scale 1, no per-node diagnostics).
pub fn solve_family(
    sigma: &MonicPolynomial,
    family: &dyn OperatorFamily,
    opts: &SolveOptions,
) -> Result<Solution> {
    let homotopy = Homotopy::new(sigma, family)?;
    let trajectory = follow_path(&homotopy, opts)?;
    let last = trajectory.last().expect("trajectory holds the start state");
    let p = DVector::from_column_slice(&last.p);
    let end = homotopy.slice(1.0)?;
    let g = end.g(&p);
    let p_matrix = recover_p(&homotopy.comp, &p, &g)?;
    let (a, b) = end.ab(&p);
    let rho = (1.0 - p[0]).sqrt();
    let diagnostics = Diagnostics {
        node_residuals: Vec::new(),
        max_residual: 0.0,
        poles: a.roots(),
        zeros: b.roots(),
        spectral_zeros: sigma.roots(),
        cee_residual: cee_residual(&p_matrix, &homotopy.comp, &g),
        singular_values: singular_values(&p_matrix),
        v_condition: 0.0,
    };
    Ok(Solution {
        a,
        b,
        sigma: sigma.clone(),
        rho,
        p_matrix,
        p: p.as_slice().to_vec(),
        scale: 1.0,
        trajectory,
        diagnostics,
    })
}

/// Solves a Nevanlinna-Pick problem with degree constraint.
pub fn solve(problem: &InterpolationProblem, opts: &SolveOptions) -> Result<Solution> {
    let violations = problem.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    let normalized = problem.normalize()?;
    let cee = CeeMatrices::new(&normalized.problem.nodes, &normalized.problem.values)?;
    let mut sol = solve_family(&problem.sigma, &cee, opts)?.denormalize(normalized.scale);
    let residuals: Vec<f64> = problem
        .nodes
        .iter()
        .zip(&problem.values)
        .map(|(z, w)| (sol.eval(*z) - w).norm())
        .collect();
    sol.diagnostics.max_residual = residuals.iter().copied().fold(0.0, f64::max);
    sol.diagnostics.node_residuals = residuals;
    sol.diagnostics.v_condition = cee.condition;
    Ok(sol)
}
