//! Dense complex polynomials in ascending-power form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::series::Jet;
use crate::error::{Error, Result};

const TRAILING_ZERO_THRESHOLD: f64 = 1e-15;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `c_0 + c_1 z + ... + c_D z^D`, with `c_D != 0` unless `D = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial and strips trailing coefficients below `1e-15 · max|c|`.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut coeffs = coeffs;
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= TRAILING_ZERO_THRESHOLD * scale) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = ONE;
        Self { coeffs }
    }

    /// `c0 + c1 z`.
    pub fn linear(c0: Complex64, c1: Complex64) -> Self {
        Self::new(vec![c0, c1])
    }

    /// `(c0 + c1 z)^n` expanded.
    pub fn linear_power(c0: Complex64, c1: Complex64, n: u32) -> Self {
        let factor = Self::linear(c0, c1);
        (0..n).fold(Self::constant(ONE), |acc, _| acc.mul(&factor))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Returns `true` if this is exactly `z^n` for some `n`.
    pub fn as_monomial(&self) -> Option<usize> {
        let d = self.degree();
        (self.coeffs[d] == ONE && self.coeffs[..d].iter().all(|c| *c == ZERO)).then_some(d)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Taylor coefficients about `z0` up to `order`, by repeated synthetic division.
    pub fn taylor(&self, z0: Complex64, order: usize) -> Jet {
        let mut work = self.coeffs.clone();
        let mut out = vec![ZERO; order + 1];
        for slot in out.iter_mut() {
            if work.is_empty() {
                break;
            }
            *slot = synthetic_divide(&mut work, z0);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Number of leading coefficients that are exactly zero.
    pub fn origin_order(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.coeffs.iter().take_while(|c| **c == ZERO).count()
    }

    /// Divides out `(z - a)^n`, checking that `|f^(k)(a)| <= tol · max|c|` for `k < n`.
    pub fn deflate(&self, a: Complex64, n: u32, tol: f64) -> Result<Self> {
        let scale = self.scale();
        let mut work = self.coeffs.clone();
        let mut factorial = 1.0;
        for k in 0..n {
            if k > 0 {
                factorial *= f64::from(k);
            }
            let remainder = if work.is_empty() { ZERO } else { synthetic_divide(&mut work, a) };
            let magnitude = remainder.norm() * factorial;
            if magnitude > tol * scale {
                return Err(Error::InsufficientMultiplicity { order: k, magnitude });
            }
        }
        Ok(Self::new(work))
    }

    /// All roots, by Aberth-Ehrlich iteration; exact zeros at the origin are reported exactly.
    pub fn roots(&self) -> Vec<Complex64> {
        if self.is_zero() {
            return Vec::new();
        }
        let origin = self.origin_order();
        let mut roots = vec![ZERO; origin];
        let reduced = Self::new(self.coeffs[origin..].to_vec());
        roots.extend(aberth(reduced.coeffs()));
        roots
    }
}

/// Divides `work` by `(z - z0)` in place and returns the remainder.
fn synthetic_divide(work: &mut Vec<Complex64>, z0: Complex64) -> Complex64 {
    let d = work.len() - 1;
    let mut carry = work[d];
    for i in (0..d).rev() {
        let next = work[i] + z0 * carry;
        work[i] = carry;
        carry = next;
    }
    work.pop();
    carry
}

fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = coeffs[d];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();
    let radius = (0..d)
        .map(|k| monic[k].norm().powf(1.0 / (d - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / d as f64 + 0.4))
        .collect();
    let deriv: Vec<Complex64> = (1..=d).map(|k| monic[k] * k as f64).collect();
    let eval = |c: &[Complex64], x: Complex64| c.iter().rev().fold(ZERO, |acc, &ci| acc * x + ci);
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..d {
            let value = eval(&monic, z[i]);
            if value == ZERO {
                continue;
            }
            let ratio = value / eval(&deriv, z[i]);
            let repulsion: Complex64 = (0..d).filter(|&j| j != i).map(|j| ONE / (z[i] - z[j])).sum();
            let step = ratio / (ONE - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_form_strips_trailing_zeros() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-20, 0.0)]);
        assert_eq!(p.degree(), 1);
        assert_eq!(Polynomial::new(vec![]).degree(), 0);
        assert!(Polynomial::new(vec![ZERO, ZERO]).is_zero());
    }

    #[test]
    fn horner_and_taylor() {
        let p = Polynomial::monomial(2);
        assert_eq!(p.eval(c(0.5, 0.0)), c(0.25, 0.0));
        // z^2 about 0.5: 0.25 + 1.0 h + h^2
        let jet = p.taylor(c(0.5, 0.0), 4);
        assert_eq!(jet, vec![c(0.25, 0.0), c(1.0, 0.0), c(1.0, 0.0), ZERO, ZERO]);
    }

    #[test]
    fn deflate_examples() {
        let a = c(0.3, -0.2);
        // z^2 - a^2 = (z - a)(z + a)
        let f = Polynomial::new(vec![-a * a, ZERO, ONE]);
        let g = f.deflate(a, 1, 1e-9).unwrap();
        assert!((g.coeffs()[0] - a).norm() < 1e-15);
        assert_eq!(g.coeffs()[1], ONE);

        let g = Polynomial::monomial(3).deflate(ZERO, 3, 1e-9).unwrap();
        assert_eq!(g.coeffs(), &[ONE]);

        // (z - 0.5)^2 (z + 1) = z^3 - 0.75 z + 0.25
        let f = Polynomial::from_real(&[0.25, -0.75, 0.0, 1.0]);
        let g = f.deflate(c(0.5, 0.0), 2, 1e-9).unwrap();
        assert_eq!(g.degree(), 1);
        assert!((g.coeffs()[0] - ONE).norm() < 1e-14);
        assert!((g.coeffs()[1] - ONE).norm() < 1e-14);
    }

    #[test]
    fn deflate_reports_offending_order() {
        // (z - 0.5)(z + 1) vanishes only to order one at 0.5
        let f = Polynomial::from_real(&[-0.5, 0.5, 1.0]);
        match f.deflate(c(0.5, 0.0), 2, 1e-9) {
            Err(Error::InsufficientMultiplicity { order, magnitude }) => {
                assert_eq!(order, 1);
                assert_relative_eq!(magnitude, 1.5, max_relative = 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
        match Polynomial::from_real(&[1.0, 1.0]).deflate(ZERO, 1, 1e-9) {
            Err(Error::InsufficientMultiplicity { order: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn roots_of_known_polynomial() {
        let f = Polynomial::from_real(&[0.25, -0.75, 0.0, 1.0]);
        let mut roots = f.roots();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-10);
        assert!((roots[1] - c(0.5, 0.0)).norm() < 1e-6);
        assert!((roots[2] - c(0.5, 0.0)).norm() < 1e-6);
        let g = Polynomial::monomial(2).mul(&Polynomial::linear(c(-0.2, 0.1), ONE));
        let roots = g.roots();
        assert_eq!(roots.iter().filter(|r| **r == ZERO).count(), 2);
        assert!(roots.iter().any(|r| (*r - c(0.2, -0.1)).norm() < 1e-12));
    }

    fn coeff_strategy() -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..7)
            .prop_map(|v| v.into_iter().map(|(re, im)| c(re, im)).collect())
    }

    proptest! {
        #[test]
        fn deflation_round_trip(
            coeffs in coeff_strategy(),
            (ar, ai) in (-0.6..0.6f64, -0.6..0.6f64),
            n in 1u32..=3,
        ) {
            let g = Polynomial::new(coeffs);
            prop_assume!(g.scale() > 1e-3 && g.coeffs().last().unwrap().norm() > 1e-2);
            let a = c(ar, ai);
            let f = Polynomial::linear_power(-a, ONE, n).mul(&g);
            let back = f.deflate(a, n, 1e-9).unwrap();
            prop_assert_eq!(back.degree(), g.degree());
            for (x, y) in back.coeffs().iter().zip(g.coeffs()) {
                prop_assert!((x - y).norm() <= 1e-10 * g.scale());
            }
        }

        #[test]
        fn taylor_reproduces_values(coeffs in coeff_strategy(), (hr, hi) in (-0.3..0.3f64, -0.3..0.3f64)) {
            let f = Polynomial::new(coeffs);
            let z0 = c(0.1, -0.2);
            let h = c(hr, hi);
            let jet = f.taylor(z0, f.degree());
            let via_jet = jet.iter().rev().fold(ZERO, |acc, &t| acc * h + t);
            prop_assert!((via_jet - f.eval(z0 + h)).norm() <= 1e-13 * (1.0 + f.scale()));
        }
    }
}
