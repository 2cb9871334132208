//! Polynomial and structured-matrix primitives.
//!
//! Coefficients are stored in descending powers throughout: `[c0, c1, ..., cn]`
//! stands for `c0 z^n + c1 z^(n-1) + ... + cn`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Imaginary residue tolerated when multiplying out conjugate-closed root sets.
const ROOT_PRODUCT_IMAG_TOL: f64 = 1e-9;

/// A real monic polynomial `z^n + c1 z^(n-1) + ... + cn`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPolynomial {
    coeffs: Vec<f64>,
}

impl MonicPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        match coeffs.first() {
            None => Err(Error::Dimension("a monic polynomial needs at least one coefficient".into())),
            Some(&c) if c != 1.0 => Err(Error::NotMonic(c)),
            Some(_) => Ok(Self { coeffs }),
        }
    }

    /// Builds `z^n + tail[0] z^(n-1) + ... + tail[n-1]`.
    pub fn from_tail(tail: &[f64]) -> Self {
        let mut coeffs = Vec::with_capacity(tail.len() + 1);
        coeffs.push(1.0);
        coeffs.extend_from_slice(tail);
        Self { coeffs }
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[0] = 1.0;
        Self { coeffs }
    }

    /// Multiplies out `prod (z - r)`. The root set must be closed under conjugation.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
            for (i, &c) in acc.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * r;
            }
            acc = next;
        }
        let scale = acc.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let worst = acc.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if worst > ROOT_PRODUCT_IMAG_TOL * scale {
            return Err(Error::NotReal {
                context: "roots are not closed under conjugation",
                residue: worst,
            });
        }
        Ok(Self {
            coeffs: acc.into_iter().map(|c| c.re).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// The non-leading coefficients `(c1, ..., cn)`.
    pub fn tail(&self) -> &[f64] {
        &self.coeffs[1..]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        eval_poly(&self.coeffs, z)
    }

    pub fn mul(&self, other: &MonicPolynomial) -> MonicPolynomial {
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        MonicPolynomial { coeffs }
    }

    pub fn roots(&self) -> Vec<Complex64> {
        poly_roots(&self.coeffs)
    }

    pub fn is_schur(&self) -> bool {
        roots_and_schur(self, 0.0).1
    }
}

/// Horner evaluation of a descending-power coefficient vector at a finite point.
pub fn eval_poly(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Evaluates `sum c_i x^i`, i.e. `x^n p(1/x)`. Used to evaluate rational
/// functions at large or infinite arguments through `x = 1/z`.
pub fn eval_reversed(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Roots of a polynomial with nonzero leading coefficient, computed as the
/// eigenvalues of its companion matrix. Sorted by (re, im) for reproducibility.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[0];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, 0)] = -coeffs[i + 1] / lead;
        if i + 1 < n {
            m[(i, i + 1)] = 1.0;
        }
    }
    let mut roots: Vec<Complex64> = m.complex_eigenvalues().iter().copied().collect();
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// All roots of `poly` and whether every root satisfies `|r| < 1 - eps`.
pub fn roots_and_schur(poly: &MonicPolynomial, eps: f64) -> (Vec<Complex64>, bool) {
    let roots = poly.roots();
    let schur = roots.iter().all(|r| r.norm() < 1.0 - eps);
    (roots, schur)
}

pub fn max_modulus(roots: &[Complex64]) -> f64 {
    roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
}

/// Companion-form data for a spectral-zero polynomial.
#[derive(Clone, Debug)]
pub struct CompanionData {
    /// `n x n`, first column `-sigma_vec`, identity on the superdiagonal.
    pub gamma: DMatrix<f64>,
    /// First unit vector.
    pub h: DVector<f64>,
    /// `(sigma_1, ..., sigma_n)`.
    pub sigma_vec: DVector<f64>,
}

impl CompanionData {
    pub fn order(&self) -> usize {
        self.sigma_vec.len()
    }
}

pub fn companion(sigma: &MonicPolynomial) -> CompanionData {
    let n = sigma.degree();
    let sigma_vec = DVector::from_column_slice(sigma.tail());
    let mut gamma = DMatrix::zeros(n, n);
    for i in 0..n {
        gamma[(i, 0)] = -sigma_vec[i];
        if i + 1 < n {
            gamma[(i, i + 1)] = 1.0;
        }
    }
    let mut h = DVector::zeros(n);
    if n > 0 {
        h[0] = 1.0;
    }
    CompanionData {
        gamma,
        h,
        sigma_vec,
    }
}

/// Entry `k` is the `z^k` coefficient of `sigma(z) sigma(1/z)`, for `k = 0..n-1`.
pub fn build_d(sigma: &MonicPolynomial) -> DVector<f64> {
    let c = sigma.coeffs();
    let n = sigma.degree();
    DVector::from_fn(n, |k, _| (0..=n - k).map(|i| c[i] * c[i + k]).sum())
}

/// The `(n+1) x (n+1)` matrix with `S(x) y = S(y) x` equal to the coefficients
/// `z^0 .. z^n` of `x(z) y(1/z) + y(z) x(1/z)`: a Hankel part plus an upper
/// triangular Toeplitz part.
pub fn build_s(x: &[f64]) -> DMatrix<f64> {
    let m = x.len();
    DMatrix::from_fn(m, m, |i, j| {
        let hankel = if i + j < m { x[i + j] } else { 0.0 };
        let toeplitz = if j >= i { x[j - i] } else { 0.0 };
        hankel + toeplitz
    })
}

/// Coefficients of `z^0 .. z^n` in `x(z) y(1/z) + y(z) x(1/z)` by direct convolution.
pub fn sym_coeffs(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "sym_coeffs needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let m = x.len();
    Ok((0..m)
        .map(|k| {
            (0..m - k)
                .map(|i| x[i] * y[i + k] + y[i] * x[i + k])
                .sum()
        })
        .collect())
}
