//! Covariance extension equation (CEE) ingredients.
//!
//! The interpolation data enter the CEE only through the pair `(u, U)`:
//! `g(P) = u + U sigma + U Gamma P h` and
//! `P = Gamma (P - P h h' P) Gamma' + g g'`.
//! For Nevanlinna-Pick data the pair comes from the similarity
//! `T = V^-1 W V - I/2`; for covariance data it comes from a power-series
//! expansion. Both are exposed through [`OperatorFamily`] so the same path
//! follower drives either problem.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polyalg::CompanionData;
use crate::problem::Node;

/// Imaginary parts below this are discarded when a matrix is known to be real.
pub const TOL_REAL: f64 = 1e-9;

/// `(u, U)` at a homotopy parameter, with their derivatives in `nu`.
#[derive(Clone, Debug)]
pub struct OperatorPair {
    pub nu: f64,
    pub u: DVector<f64>,
    pub big_u: DMatrix<f64>,
    pub u_dot: DVector<f64>,
    pub big_u_dot: DMatrix<f64>,
}

impl OperatorPair {
    pub fn zero(n: usize) -> Self {
        Self {
            nu: 0.0,
            u: DVector::zeros(n),
            big_u: DMatrix::zeros(n, n),
            u_dot: DVector::zeros(n),
            big_u_dot: DMatrix::zeros(n, n),
        }
    }

    pub fn order(&self) -> usize {
        self.u.len()
    }
}

/// A one-parameter family of CEE operator pairs with `(u, U)(0) = (0, 0)`.
pub trait OperatorFamily: Sync {
    fn order(&self) -> usize;

    fn pair(&self, nu: f64) -> Result<OperatorPair>;

    /// True when the family does not depend on `nu`, so the start point is the answer.
    fn is_constant(&self) -> bool;
}

/// Row `k` is `(1, z_k^-1, ..., z_k^-n)`, i.e. `(z_k^n, ..., 1)` scaled by `z_k^-n`;
/// the infinite node gives the first unit row.
pub fn build_v(nodes: &[Node]) -> Result<DMatrix<Complex64>> {
    let m = nodes.len();
    for k in 0..m {
        for l in k + 1..m {
            if nodes[k] == nodes[l] {
                return Err(Error::Singular("Vandermonde matrix (coincident nodes)"));
            }
        }
    }
    let inv: Vec<Complex64> = nodes.iter().map(Node::inv).collect();
    Ok(DMatrix::from_fn(m, m, |k, j| inv[k].powu(j as u32)))
}

/// Diagonal of `W(nu) = I/2 + nu (W - I/2)`.
pub fn build_w(values: &[Complex64], nu: f64) -> DVector<Complex64> {
    DVector::from_iterator(values.len(), values.iter().map(|w| 0.5 + nu * (w - 0.5)))
}

/// `T = V^-1 W V - I/2` for a diagonal `W`, returned as a real matrix.
pub fn build_t(v: &DMatrix<Complex64>, w: &DVector<Complex64>) -> Result<DMatrix<f64>> {
    let m = v.nrows();
    let wv = DMatrix::from_fn(m, m, |i, j| w[i] * v[(i, j)]);
    let lu = v.clone().lu();
    let mut t = lu
        .solve(&wv)
        .ok_or(Error::Singular("Vandermonde matrix"))?;
    for i in 0..m {
        t[(i, i)] -= 0.5;
    }
    realify(&t, "T = V^-1 W V - I/2")
}

fn realify(m: &DMatrix<Complex64>, context: &'static str) -> Result<DMatrix<f64>> {
    let residue = m.iter().map(|x| x.im.abs()).fold(0.0, f64::max);
    if residue > TOL_REAL {
        return Err(Error::NotReal { context, residue });
    }
    Ok(m.map(|x| x.re))
}

fn split_bottom(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows() - 1;
    let u = m.view((1, 0), (n, 1)).column(0).into_owned();
    let big_u = m.view((1, 1), (n, n)).into_owned();
    (u, big_u)
}

/// `[u U] = [0 I_n] (I + T)^-1 T`.
pub fn compute_uu(t: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let m = t.nrows();
    let lu = (DMatrix::identity(m, m) + t).lu();
    let x = lu
        .solve(t)
        .ok_or(Error::Singular("I + T (corrupt interpolation data)"))?;
    Ok(split_bottom(&x))
}

/// `[u' U'] = [0 I_n] (I + T)^-1 T' (I + T)^-1`, the derivative of
/// `(I + T)^-1 T = I - (I + T)^-1`.
pub fn compute_uu_dot(
    t: &DMatrix<f64>,
    t_dot: &DMatrix<f64>,
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let m = t.nrows();
    let r = (DMatrix::identity(m, m) + t)
        .try_inverse()
        .ok_or(Error::Singular("I + T (corrupt interpolation data)"))?;
    Ok(split_bottom(&(&r * t_dot * &r)))
}

/// Nevanlinna-Pick operator data for a normalized problem (`w_0 = 1/2`).
#[derive(Clone, Debug)]
pub struct CeeMatrices {
    pub v: DMatrix<Complex64>,
    pub w_target: DVector<Complex64>,
    /// `V^-1 (W - I/2) V`; `T(nu) = nu * t_dot`.
    pub t_dot: DMatrix<f64>,
    /// 2-norm condition number of `V`.
    pub condition: f64,
}

impl CeeMatrices {
    pub fn new(nodes: &[Node], values: &[Complex64]) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::Dimension(format!(
                "need n+1 >= 2 nodes and values, got {} and {}",
                nodes.len(),
                values.len()
            )));
        }
        let v = build_v(nodes)?;
        let w_target = DVector::from_column_slice(values);
        let shifted = w_target.map(|w| w - 0.5);
        let t_dot = build_t_shifted(&v, &shifted)?;
        let sv = v.clone().singular_values();
        let smax = sv.iter().copied().fold(0.0, f64::max);
        let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self {
            v,
            w_target,
            t_dot,
            condition: smax / smin,
        })
    }

    pub fn t_at(&self, nu: f64) -> DMatrix<f64> {
        &self.t_dot * nu
    }
}

/// `V^-1 diag(shift) V` without forming `W - I/2` by subtraction on the
/// diagonal of the result.
fn build_t_shifted(v: &DMatrix<Complex64>, shift: &DVector<Complex64>) -> Result<DMatrix<f64>> {
    let m = v.nrows();
    let sv = DMatrix::from_fn(m, m, |i, j| shift[i] * v[(i, j)]);
    let t = v
        .clone()
        .lu()
        .solve(&sv)
        .ok_or(Error::Singular("Vandermonde matrix"))?;
    realify(&t, "V^-1 (W - I/2) V")
}

impl OperatorFamily for CeeMatrices {
    fn order(&self) -> usize {
        self.t_dot.nrows() - 1
    }

    fn pair(&self, nu: f64) -> Result<OperatorPair> {
        let t = self.t_at(nu);
        let (u, big_u) = compute_uu(&t)?;
        let (u_dot, big_u_dot) = compute_uu_dot(&t, &self.t_dot)?;
        Ok(OperatorPair {
            nu,
            u,
            big_u,
            u_dot,
            big_u_dot,
        })
    }

    fn is_constant(&self) -> bool {
        self.t_dot.iter().all(|&x| x == 0.0)
    }
}

/// Power-series coefficients of `1 / (1 + c_1 x + ... + c_n x^n)` up to `x^n`.
fn reciprocal_series(c: &[f64], n: usize) -> Vec<f64> {
    let mut q = vec![0.0; n + 1];
    q[0] = 1.0;
    for t in 1..=n {
        q[t] = -(1..=t.min(c.len())).map(|i| c[i - 1] * q[t - i]).sum::<f64>();
    }
    q
}

fn lower_toeplitz(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    DMatrix::from_fn(n, n, |i, j| if i > j { u[i - j - 1] } else { 0.0 })
}

fn check_covariance(c: &[f64]) -> Result<()> {
    if c.first() != Some(&1.0) {
        return Err(Error::InvalidArgument("covariance sequence must start with c_0 = 1".into()));
    }
    let m = c.len();
    let toeplitz = DMatrix::from_fn(m, m, |i, j| c[i.abs_diff(j)]);
    toeplitz.cholesky().ok_or(Error::NotCovariance)?;
    Ok(())
}

/// `(u, U)` for the rational covariance extension problem:
/// `z^n / (z^n + c_1 z^(n-1) + ... + c_n) = 1 - u_1 z^-1 - u_2 z^-2 - ...`,
/// with `U` the strictly lower triangular Toeplitz matrix built from `u`.
pub fn uu_from_covariance(c: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>)> {
    check_covariance(c)?;
    let n = c.len() - 1;
    let q = reciprocal_series(&c[1..], n);
    let u = DVector::from_iterator(n, q[1..].iter().map(|x| -x));
    let big_u = lower_toeplitz(&u);
    Ok((u, big_u))
}

/// Covariance data `(1, nu c_1, ..., nu c_n)`; every member of the family is a
/// valid covariance sequence because its Toeplitz matrix is `(1-nu) I + nu T_n`.
#[derive(Clone, Debug)]
pub struct CovarianceFamily {
    c: Vec<f64>,
}

impl CovarianceFamily {
    pub fn new(c: Vec<f64>) -> Result<Self> {
        check_covariance(&c)?;
        if c.len() < 2 {
            return Err(Error::Dimension("covariance sequence needs n >= 1".into()));
        }
        Ok(Self { c })
    }

    pub fn covariances(&self) -> &[f64] {
        &self.c
    }
}

impl OperatorFamily for CovarianceFamily {
    fn order(&self) -> usize {
        self.c.len() - 1
    }

    fn pair(&self, nu: f64) -> Result<OperatorPair> {
        let n = self.order();
        let c = &self.c[1..];
        let mut q = vec![0.0; n + 1];
        let mut dq = vec![0.0; n + 1];
        q[0] = 1.0;
        for t in 1..=n {
            let (mut s, mut ds) = (0.0, 0.0);
            for i in 1..=t {
                s += c[i - 1] * q[t - i];
                ds += c[i - 1] * (q[t - i] + nu * dq[t - i]);
            }
            q[t] = -nu * s;
            dq[t] = -ds;
        }
        let u = DVector::from_iterator(n, q[1..].iter().map(|x| -x));
        let u_dot = DVector::from_iterator(n, dq[1..].iter().map(|x| -x));
        Ok(OperatorPair {
            nu,
            big_u: lower_toeplitz(&u),
            big_u_dot: lower_toeplitz(&u_dot),
            u,
            u_dot,
        })
    }

    fn is_constant(&self) -> bool {
        self.c[1..].iter().all(|&x| x == 0.0)
    }
}

/// `g = u + U sigma + U Gamma p`.
pub fn g_of_p(pair: &OperatorPair, comp: &CompanionData, p: &DVector<f64>) -> DVector<f64> {
    let x = &comp.gamma * p + &comp.sigma_vec;
    &pair.u + &pair.big_u * x
}

/// Frobenius norm of `P - Gamma (P - P h h' P) Gamma' - g g'`.
pub fn cee_residual(p_mat: &DMatrix<f64>, comp: &CompanionData, g: &DVector<f64>) -> f64 {
    let ph = p_mat * &comp.h;
    let inner = p_mat - &ph * ph.transpose();
    let r = p_mat - &comp.gamma * inner * comp.gamma.transpose() - g * g.transpose();
    r.norm()
}

/// Solves the Stein equation `X - A X A' = Q` by vectorization.
pub fn solve_stein(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let kron = a.kronecker(a);
    let lhs = DMatrix::<f64>::identity(n * n, n * n) - kron;
    let rhs = DVector::from_column_slice(q.as_slice());
    let x = lhs
        .lu()
        .solve(&rhs)
        .ok_or(Error::Singular("Stein operator (Gamma not Schur)"))?;
    Ok(DMatrix::from_column_slice(n, n, x.as_slice()))
}

/// Tolerances for the checks performed on a recovered `P`.
pub const RECOVER_SYM_TOL: f64 = 1e-10;
pub const RECOVER_PH_TOL: f64 = 1e-8;
pub const RECOVER_PSD_TOL: f64 = 1e-8;

/// The unique symmetric solution of
/// `P - Gamma P Gamma' = -Gamma p p' Gamma' + g g'`, checked against
/// `P h = p`, `P >= 0` and `h' P h < 1`.
pub fn recover_p(comp: &CompanionData, p: &DVector<f64>, g: &DVector<f64>) -> Result<DMatrix<f64>> {
    let gp = &comp.gamma * p;
    let q = g * g.transpose() - &gp * gp.transpose();
    let x = solve_stein(&comp.gamma, &q)?;
    let asym = (&x - x.transpose()).amax();
    if asym > RECOVER_SYM_TOL {
        return Err(Error::NotReal {
            context: "recovered P is not symmetric",
            residue: asym,
        });
    }
    let x = (&x + x.transpose()) * 0.5;
    let ph_err = (&x * &comp.h - p).amax();
    if ph_err > RECOVER_PH_TOL {
        return Err(Error::OffTrajectory(ph_err));
    }
    let hph = x[(0, 0)];
    if !(hph < 1.0) {
        return Err(Error::RhoNotPositive(hph));
    }
    let min_eig = x
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -RECOVER_PSD_TOL {
        return Err(Error::NotPsd(min_eig));
    }
    Ok(x)
}
