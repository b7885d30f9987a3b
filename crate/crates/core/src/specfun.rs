//! Log-Gamma, Beta, and the closed-form sharp constants.
//!
//! Every Gamma ratio is assembled in log space so that large values of
//! `N p / 2 + alpha` never overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;
const LANCZOS_BASE: f64 = 0.999_999_999_999_997_1;
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];

/// Natural logarithm of the Gamma function for real `x > 0`.
///
/// Lanczos approximation with `g = 607/128` and 14 correction terms.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma requires a finite x > 0, got {x}"));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    // Exact values at the two integer roots keep Beta ratios clean.
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut series = LANCZOS_BASE;
    let mut y = x;
    for c in LANCZOS_COEFFS {
        y += 1.0;
        series += c / y;
    }
    tmp + (LANCZOS_SQRT_TWO_PI * series / x).ln()
}

/// Euler Beta function `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    Ok(log_beta(x, y)?.exp())
}

pub fn log_beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return domain(format!("beta requires positive arguments, got ({x}, {y})"));
    }
    Ok(log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?)
}

/// Parameters `(N, p, alpha)` of one sharp-constant evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpConstantParams {
    n: u32,
    p: f64,
    alpha: f64,
}

impl SharpConstantParams {
    pub fn new(n: u32, p: f64, alpha: f64) -> Result<Self> {
        if n < 1 {
            return domain("zero multiplicity N must be at least 1");
        }
        if !(p > 0.0) || !p.is_finite() {
            return domain(format!("exponent p must be finite and positive, got {p}"));
        }
        if !(alpha > -1.0) || !alpha.is_finite() {
            return domain(format!("weight exponent alpha must exceed -1, got {alpha}"));
        }
        Ok(Self { n, p, alpha })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The exponent `(2 + alpha) / p` of the growth bound.
    pub fn growth_exponent(&self) -> f64 {
        (2.0 + self.alpha) / self.p
    }
}

/// `ln C(N, p, alpha)` where
/// `C = (Γ(Np/2 + 2 + α) / (Γ(2 + α) Γ(Np/2 + 1)))^{1/p}`.
pub fn log_sharp_constant(params: SharpConstantParams) -> f64 {
    let half = f64::from(params.n) * params.p / 2.0;
    let a = params.alpha;
    (log_gamma_unchecked(half + 2.0 + a) - log_gamma_unchecked(2.0 + a) - log_gamma_unchecked(half + 1.0))
        / params.p
}

/// Optimal constant in `‖f / φ_a^N‖ ≤ C ‖f‖` on the standard weighted space.
pub fn sharp_constant(params: SharpConstantParams) -> f64 {
    log_sharp_constant(params).exp()
}

/// Largest possible `|f^(N)(a)|` over unit-norm `f` vanishing to order `N` at `a`.
pub fn derivative_bound(params: SharpConstantParams, a: Complex64) -> Result<f64> {
    let modulus_sq = a.norm_sqr();
    if !(modulus_sq < 1.0) {
        return domain(format!("point a = {a} must lie in the open unit disk"));
    }
    let n = f64::from(params.n);
    let log_factorial = log_gamma_unchecked(n + 1.0);
    let exponent = n + params.growth_exponent();
    Ok((log_factorial + log_sharp_constant(params) - exponent * (1.0 - modulus_sq).ln()).exp())
}
