//! Analytic functions on the unit disk.
//!
//! Besides plain polynomials, [`AnalyticFunction`] carries the closed forms
//! that appear in the extremal problems: powers of a Blaschke factor, the
//! growth extremal `f_a`, the division extremal `I_a(z^N)`, and the
//! compositions and quotients produced by [`apply_isometry`] and
//! [`divide_by_blaschke`]. Closed forms are never re-expanded into series, so
//! every variant evaluates to machine precision anywhere in the disk.
//!
//! Fractional powers use the principal branch of `(1 - conj(a) z)^s`. Since
//! `Re(1 - conj(a) z) > 0` on the disk this is analytic, and it differs from
//! any other branch of `(φ_a')^s` by a constant of modulus one.

mod mobius;
mod polynomial;
pub(crate) mod series;

pub use mobius::{mobius_derivative, MobiusMap};
pub use polynomial::Polynomial;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
pub(crate) use mobius::check_in_disk;
use series::{Exponent, Jet};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default relative tolerance for zero-multiplicity checks.
pub const DEFAULT_MULTIPLICITY_TOL: f64 = 1e-9;

/// Extra Taylor terms used when evaluating a quotient next to its removable singularity.
const QUOTIENT_LOCAL_TERMS: usize = 28;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFunction {
    Polynomial(Polynomial),
    /// `φ_a(z)^n`.
    BlaschkePower { a: Complex64, n: u32 },
    /// `((1 - |a|²) / (1 - conj(a) z)²)^{(2+α)/p}`, the unit-norm maximizer of `|f(a)|`.
    GrowthExtremal { a: Complex64, p: f64, alpha: f64 },
    /// `(a - z)^n (1 - |a|²)^s / (1 - conj(a) z)^{n + 2s}` with `s = (2+α)/p`.
    DivisionExtremal { a: Complex64, n: u32, p: f64, alpha: f64 },
    Product(Vec<AnalyticFunction>),
    /// `inner(φ(z))`.
    Composition { inner: Box<AnalyticFunction>, map: MobiusMap },
    /// `numerator(z) / φ_a(z)^n`, with the singularity at `a` removed.
    Quotient { numerator: Box<AnalyticFunction>, a: Complex64, n: u32 },
}

fn check_exponents(p: f64, alpha: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("exponent p must be finite and positive, got {p}"));
    }
    if !(alpha > -1.0 && alpha.is_finite()) {
        return domain(format!("weight exponent alpha must exceed -1, got {alpha}"));
    }
    Ok(())
}

fn check_order(n: u32) -> Result<()> {
    if n == 0 {
        return domain("zero multiplicity N must be at least 1");
    }
    Ok(())
}

fn growth_exponent(p: f64, alpha: f64) -> f64 {
    (2.0 + alpha) / p
}

impl AnalyticFunction {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self::Polynomial(Polynomial::new(coeffs))
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        Self::Polynomial(Polynomial::monomial(n))
    }

    pub fn blaschke_power(a: Complex64, n: u32) -> Result<Self> {
        check_in_disk(a, "a")?;
        check_order(n)?;
        Ok(Self::BlaschkePower { a, n })
    }

    pub fn growth_extremal(a: Complex64, p: f64, alpha: f64) -> Result<Self> {
        check_in_disk(a, "a")?;
        check_exponents(p, alpha)?;
        Ok(Self::GrowthExtremal { a, p, alpha })
    }

    pub fn division_extremal(a: Complex64, n: u32, p: f64, alpha: f64) -> Result<Self> {
        check_in_disk(a, "a")?;
        check_order(n)?;
        check_exponents(p, alpha)?;
        Ok(Self::DivisionExtremal { a, n, p, alpha })
    }

    pub fn composition(inner: AnalyticFunction, map: MobiusMap) -> Self {
        Self::Composition { inner: Box::new(inner), map }
    }

    /// Value at `z`; the caller guarantees `|z| < 1`.
    pub fn value(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Polynomial(poly) => poly.eval(z),
            Self::BlaschkePower { a, n } => ((a - z) / (ONE - a.conj() * z)).powi(*n as i32),
            Self::GrowthExtremal { a, p, alpha } => {
                let s = growth_exponent(*p, *alpha);
                let log_kernel = (ONE - a.conj() * z).ln();
                ((1.0 - a.norm_sqr()).ln() * s - log_kernel * (2.0 * s)).exp()
            }
            Self::DivisionExtremal { a, n, p, alpha } => {
                let s = growth_exponent(*p, *alpha);
                let log_kernel = (ONE - a.conj() * z).ln();
                let tail = ((1.0 - a.norm_sqr()).ln() * s - log_kernel * (f64::from(*n) + 2.0 * s)).exp();
                (a - z).powi(*n as i32) * tail
            }
            Self::Product(factors) => factors.iter().fold(ONE, |acc, f| acc * f.value(z)),
            Self::Composition { inner, map } => inner.value(map.apply(z)),
            Self::Quotient { numerator, a, n } => {
                if (z - a).norm() >= quotient_local_radius(*a) {
                    let factor = (ONE - a.conj() * z) / (a - z);
                    numerator.value(z) * factor.powi(*n as i32)
                } else {
                    self.jet(z, 0)[0]
                }
            }
        }
    }

    /// Taylor coefficients `f^(k)(z0) / k!` for `k = 0..=order`.
    pub(crate) fn jet(&self, z0: Complex64, order: usize) -> Jet {
        match self {
            Self::Polynomial(poly) => poly.taylor(z0, order),
            Self::BlaschkePower { a, n } => {
                let top = series::linear_power(a - z0, -ONE, Exponent::Integer(*n as i32), order);
                let bottom = kernel_jet(*a, z0, Exponent::Integer(-(*n as i32)), order);
                series::mul(&top, &bottom)
            }
            Self::GrowthExtremal { a, p, alpha } => {
                let s = growth_exponent(*p, *alpha);
                let mut jet = kernel_jet(*a, z0, Exponent::Real(-2.0 * s), order);
                series::scale(&mut jet, Complex64::new((1.0 - a.norm_sqr()).powf(s), 0.0));
                jet
            }
            Self::DivisionExtremal { a, n, p, alpha } => {
                let s = growth_exponent(*p, *alpha);
                let top = series::linear_power(a - z0, -ONE, Exponent::Integer(*n as i32), order);
                let bottom = kernel_jet(*a, z0, Exponent::Real(-(f64::from(*n) + 2.0 * s)), order);
                let mut jet = series::mul(&top, &bottom);
                series::scale(&mut jet, Complex64::new((1.0 - a.norm_sqr()).powf(s), 0.0));
                jet
            }
            Self::Product(factors) => factors
                .iter()
                .fold(series::constant(ONE, order), |acc, f| series::mul(&acc, &f.jet(z0, order))),
            Self::Composition { inner, map } => {
                let b = map.center();
                let outer = inner.jet(map.apply(z0), order);
                let top = series::linear_power(b - z0, -ONE, Exponent::Integer(1), order);
                let bottom = kernel_jet(b, z0, Exponent::Integer(-1), order);
                series::compose(&outer, &series::mul(&top, &bottom))
            }
            Self::Quotient { numerator, a, n } => {
                let n_us = *n as usize;
                let kernel = kernel_jet(*a, z0, Exponent::Integer(*n as i32), order);
                let reduced = if (z0 - a).norm() >= quotient_local_radius(*a) {
                    let inverse = series::linear_power(a - z0, -ONE, Exponent::Integer(-(*n as i32)), order);
                    series::mul(&numerator.jet(z0, order), &inverse)
                } else {
                    // numerator / (a - z)^n from the Taylor expansion at a, re-centred at z0
                    let local = numerator.jet(*a, n_us + order + QUOTIENT_LOCAL_TERMS);
                    let sign = if n % 2 == 0 { ONE } else { -ONE };
                    let shifted: Vec<Complex64> = local[n_us..].iter().map(|c| c * sign).collect();
                    Polynomial::new(shifted).taylor(z0 - a, order)
                };
                series::mul(&reduced, &kernel)
            }
        }
    }

    /// Zeros inside the open disk, repeated by multiplicity.
    ///
    /// Polynomial zeros come from a numerical root finder; the rest are exact.
    pub fn zeros(&self) -> Vec<Complex64> {
        match self {
            Self::Polynomial(poly) => poly.roots().into_iter().filter(|z| z.norm() < 1.0).collect(),
            Self::BlaschkePower { a, n } | Self::DivisionExtremal { a, n, .. } => vec![*a; *n as usize],
            Self::GrowthExtremal { .. } => Vec::new(),
            Self::Product(factors) => factors.iter().flat_map(|f| f.zeros()).collect(),
            Self::Composition { inner, map } => inner.zeros().into_iter().map(|w| map.apply(w)).collect(),
            Self::Quotient { numerator, a, n } => {
                let mut zeros = numerator.zeros();
                for _ in 0..*n {
                    let nearest = zeros
                        .iter()
                        .enumerate()
                        .min_by(|x, y| (x.1 - a).norm().total_cmp(&(y.1 - a).norm()))
                        .map(|(i, _)| i);
                    if let Some(i) = nearest {
                        zeros.swap_remove(i);
                    }
                }
                zeros
            }
        }
    }

    /// Vanishing order at `a` when it follows from the structure alone.
    fn structural_order(&self, a: Complex64) -> Option<u32> {
        match self {
            Self::BlaschkePower { a: b, n } | Self::DivisionExtremal { a: b, n, .. } => {
                Some(if *b == a { *n } else { 0 })
            }
            Self::GrowthExtremal { .. } => Some(0),
            Self::Product(factors) => factors.iter().map(|f| f.structural_order(a)).sum(),
            _ => None,
        }
    }

    /// A rough sup-norm used to make multiplicity tolerances relative.
    fn sample_scale(&self, a: Complex64) -> f64 {
        let radius = 0.5 * (1.0 + a.norm());
        (0..16)
            .map(|k| self.value(Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / 16.0)).norm())
            .fold(self.value(ZERO).norm(), f64::max)
    }

    /// Numerical vanishing order at `a`, capped at `cap`.
    fn numerical_order(&self, a: Complex64, cap: u32, tol: f64) -> (u32, f64) {
        let scale = match self {
            Self::Polynomial(poly) => poly.scale(),
            _ => self.sample_scale(a),
        };
        let jet = self.jet(a, cap as usize);
        let mut factorial = 1.0;
        for (k, coeff) in jet.iter().enumerate().take(cap as usize) {
            if k > 0 {
                factorial *= k as f64;
            }
            let magnitude = coeff.norm() * factorial;
            if magnitude > tol * scale {
                return (k as u32, magnitude);
            }
        }
        (cap, 0.0)
    }
}

fn quotient_local_radius(a: Complex64) -> f64 {
    0.1 * (1.0 - a.norm())
}

/// Jet of `(1 - conj(a) z)^e` about `z0`.
fn kernel_jet(a: Complex64, z0: Complex64, e: Exponent, order: usize) -> Jet {
    series::linear_power(ONE - a.conj() * z0, -a.conj(), e, order)
}

/// `f^(k)(z)` for `|z| < 1`.
pub fn evaluate(f: &AnalyticFunction, z: Complex64, derivative_order: usize) -> Result<Complex64> {
    check_in_disk(z, "z")?;
    if derivative_order == 0 {
        return Ok(f.value(z));
    }
    let jet = f.jet(z, derivative_order);
    Ok(jet[derivative_order] * series::factorial(derivative_order))
}

/// The weighted composition `z ↦ u(z)^{(2+α)/p} f(φ_a(z))` with `u = (1-|a|²)/(1-conj(a) z)²`.
///
/// `|I_a f(z)| = |φ_a'(z)|^{(2+α)/p} |f(φ_a(z))|` holds exactly; the argument
/// differs from `(φ_a')^{(2+α)/p}` by a fixed unimodular constant.
pub fn apply_isometry(f: &AnalyticFunction, a: Complex64, p: f64, alpha: f64) -> Result<AnalyticFunction> {
    check_in_disk(a, "a")?;
    check_exponents(p, alpha)?;
    let map = MobiusMap::new(a)?;
    let growth = AnalyticFunction::GrowthExtremal { a, p, alpha };
    if let AnalyticFunction::Polynomial(poly) = f {
        if let Some(n) = poly.as_monomial() {
            return Ok(if n == 0 {
                growth
            } else {
                AnalyticFunction::DivisionExtremal { a, n: n as u32, p, alpha }
            });
        }
    }
    Ok(AnalyticFunction::Product(vec![growth, AnalyticFunction::composition(f.clone(), map)]))
}

/// Writes `f(z) = (z - a)^n g(z)` and returns `g`.
pub fn deflate_zero(f: &Polynomial, a: Complex64, n: u32, tol: f64) -> Result<Polynomial> {
    check_in_disk(a, "a")?;
    check_order(n)?;
    f.deflate(a, n, tol)
}

/// `f / φ_a^n`, after checking that `f` vanishes to order `n` at `a`.
pub fn divide_by_blaschke(f: &AnalyticFunction, a: Complex64, n: u32, tol: f64) -> Result<AnalyticFunction> {
    check_in_disk(a, "a")?;
    check_order(n)?;
    match f {
        AnalyticFunction::Polynomial(poly) => {
            let g = poly.deflate(a, n, tol)?;
            let sign = if n.is_multiple_of(2) { ONE } else { -ONE };
            let factor = Polynomial::linear_power(ONE, -a.conj(), n).scaled(sign);
            Ok(AnalyticFunction::Polynomial(g.mul(&factor)))
        }
        AnalyticFunction::BlaschkePower { a: b, n: m } if *b == a && *m >= n => Ok(if *m == n {
            AnalyticFunction::Polynomial(Polynomial::constant(ONE))
        } else {
            AnalyticFunction::BlaschkePower { a, n: m - n }
        }),
        AnalyticFunction::DivisionExtremal { a: b, n: m, p, alpha } if *b == a && *m >= n => {
            let growth = AnalyticFunction::GrowthExtremal { a, p: *p, alpha: *alpha };
            Ok(if *m == n {
                growth
            } else {
                AnalyticFunction::Product(vec![AnalyticFunction::BlaschkePower { a, n: m - n }, growth])
            })
        }
        AnalyticFunction::Product(factors) => divide_product(f, factors, a, n, tol),
        _ => {
            let available = f.structural_order(a).unwrap_or_else(|| f.numerical_order(a, n, tol).0);
            if available < n {
                let (order, magnitude) = f.numerical_order(a, n, tol);
                return Err(Error::InsufficientMultiplicity { order: order.min(available), magnitude });
            }
            Ok(AnalyticFunction::Quotient { numerator: Box::new(f.clone()), a, n })
        }
    }
}

fn divide_product(
    whole: &AnalyticFunction,
    factors: &[AnalyticFunction],
    a: Complex64,
    n: u32,
    tol: f64,
) -> Result<AnalyticFunction> {
    let mut remaining = n;
    let mut divided = Vec::with_capacity(factors.len());
    for factor in factors {
        let available = factor
            .structural_order(a)
            .unwrap_or_else(|| factor.numerical_order(a, remaining.max(1), tol).0);
        let take = available.min(remaining);
        if take > 0 {
            divided.push(divide_by_blaschke(factor, a, take, tol)?);
            remaining -= take;
        } else {
            divided.push(factor.clone());
        }
    }
    if remaining > 0 {
        let (order, magnitude) = whole.numerical_order(a, n, tol);
        return Err(Error::InsufficientMultiplicity { order: order.min(n - remaining), magnitude });
    }
    Ok(AnalyticFunction::Product(divided))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
        let r = radius * rng.random::<f64>().sqrt();
        Complex64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU)
    }

    fn random_poly(rng: &mut impl Rng, degree: usize) -> Polynomial {
        Polynomial::new((0..=degree).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
    }

    #[test]
    fn evaluate_examples() {
        let z2 = AnalyticFunction::monomial(2);
        assert_eq!(evaluate(&z2, c(0.5, 0.0), 0).unwrap(), c(0.25, 0.0));
        let a = c(0.2, -0.4);
        let phi = AnalyticFunction::blaschke_power(a, 1).unwrap();
        assert!(evaluate(&phi, a, 0).unwrap().norm() < 1e-16);
        assert!(evaluate(&z2, c(1.0, 0.0), 0).is_err());
    }

    #[test]
    fn variants_agree_where_they_overlap() {
        let phi0 = AnalyticFunction::blaschke_power(ZERO, 1).unwrap();
        let poly = AnalyticFunction::polynomial(vec![ZERO, -ONE]);
        let extremal = AnalyticFunction::division_extremal(ZERO, 1, 2.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let z = disk_point(&mut rng, 0.95);
            assert!((phi0.value(z) - poly.value(z)).norm() < 1e-15);
            assert!((extremal.value(z) + z).norm() < 1e-15);
            for k in 1..3 {
                let d1 = evaluate(&phi0, z, k).unwrap();
                let d2 = evaluate(&poly, z, k).unwrap();
                assert!((d1 - d2).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn closed_form_derivatives_match_finite_differences() {
        let a = c(0.3, 0.25);
        let functions = [
            AnalyticFunction::growth_extremal(a, 0.7, 1.3).unwrap(),
            AnalyticFunction::division_extremal(a, 2, 1.5, -0.4).unwrap(),
            AnalyticFunction::blaschke_power(a, 3).unwrap(),
            AnalyticFunction::composition(AnalyticFunction::polynomial(vec![ONE, c(0.5, 0.5), c(0.0, 2.0)]), MobiusMap::new(a).unwrap()),
        ];
        let z = c(-0.1, 0.35);
        let h = 1e-5;
        for f in &functions {
            let fd = (f.value(z + h) - f.value(z - h)) / (2.0 * h);
            let exact = evaluate(f, z, 1).unwrap();
            assert!((fd - exact).norm() <= 1e-7 * (1.0 + exact.norm()), "{f:?}");
            let fd2 = (f.value(z + h) - 2.0 * f.value(z) + f.value(z - h)) / (h * h);
            let exact2 = evaluate(f, z, 2).unwrap();
            assert!((fd2 - exact2).norm() <= 1e-4 * (1.0 + exact2.norm()), "{f:?}");
        }
    }

    #[test]
    fn division_extremal_vanishes_to_order_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let a = disk_point(&mut rng, 0.8);
            let n = rng.random_range(1..=3);
            let p = rng.random_range(0.3..4.0);
            let alpha = rng.random_range(-0.9..3.0);
            let f = AnalyticFunction::division_extremal(a, n, p, alpha).unwrap();
            assert_eq!(f.value(a).norm(), 0.0);
            // central differences of the (k-1)th derivative
            let h = 1e-5;
            for k in 1..n as usize {
                let scale = evaluate(&f, a, n as usize).unwrap().norm();
                let fd = (evaluate(&f, a + h, k - 1).unwrap() - evaluate(&f, a - h, k - 1).unwrap()) / (2.0 * h);
                assert!(fd.norm() <= 1e-6 * scale.max(1.0));
                assert!(evaluate(&f, a, k).unwrap().norm() <= 1e-12 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn isometry_of_constant_is_growth_extremal() {
        let a = c(0.4, -0.1);
        let g = apply_isometry(&AnalyticFunction::polynomial(vec![ONE]), a, 1.7, 0.5).unwrap();
        assert_eq!(g, AnalyticFunction::GrowthExtremal { a, p: 1.7, alpha: 0.5 });
        let z = apply_isometry(&AnalyticFunction::monomial(2), a, 1.7, 0.5).unwrap();
        assert_eq!(z, AnalyticFunction::DivisionExtremal { a, n: 2, p: 1.7, alpha: 0.5 });
    }

    #[test]
    fn isometry_at_origin_reflects() {
        let f = AnalyticFunction::Polynomial(Polynomial::new(vec![c(0.3, 0.1), c(-1.0, 0.2), c(0.5, 0.5)]));
        let g = apply_isometry(&f, ZERO, 2.5, 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let z = disk_point(&mut rng, 0.99);
            assert_relative_eq!(g.value(z).norm(), f.value(-z).norm(), max_relative = 1e-13);
        }
    }

    #[test]
    fn isometry_modulus_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..40 {
            let a = disk_point(&mut rng, 0.9);
            let p = rng.random_range(0.3..5.0);
            let alpha = rng.random_range(-0.9..3.0);
            let f = if trial % 4 == 3 {
                AnalyticFunction::growth_extremal(disk_point(&mut rng, 0.7), 1.2, 0.0).unwrap()
            } else {
                AnalyticFunction::Polynomial(random_poly(&mut rng, trial % 6))
            };
            let g = apply_isometry(&f, a, p, alpha).unwrap();
            let map = MobiusMap::new(a).unwrap();
            for _ in 0..20 {
                let z = disk_point(&mut rng, 0.98);
                let expected = map.derivative(z).norm().powf((2.0 + alpha) / p) * f.value(map.apply(z)).norm();
                let got = g.value(z).norm();
                assert!((got - expected).abs() <= 1e-12 * expected.max(1e-300) + 1e-300, "{got} vs {expected}");
            }
        }
    }

    #[test]
    fn isometry_of_monomial_matches_division_extremal_modulus() {
        // generic composition path, bypassing the monomial shortcut
        let a = c(-0.35, 0.5);
        let f = AnalyticFunction::Polynomial(Polynomial::new(vec![ZERO, ZERO, c(1.0, 1e-300)]));
        let generic = apply_isometry(&f, a, 0.8, 1.0).unwrap();
        let closed = AnalyticFunction::division_extremal(a, 2, 0.8, 1.0).unwrap();
        for k in 0..20 {
            let z = Complex64::from_polar(0.9 * k as f64 / 20.0, k as f64);
            assert_relative_eq!(generic.value(z).norm(), closed.value(z).norm(), max_relative = 1e-11, epsilon = 1e-300);
        }
    }

    #[test]
    fn deflate_zero_validates() {
        let f = Polynomial::monomial(2);
        assert!(deflate_zero(&f, c(1.0, 0.0), 1, 1e-9).is_err());
        assert!(deflate_zero(&f, ZERO, 0, 1e-9).is_err());
        assert_eq!(deflate_zero(&f, ZERO, 2, 1e-9).unwrap().coeffs(), &[ONE]);
    }

    #[test]
    fn divide_monomial_by_blaschke() {
        let q = divide_by_blaschke(&AnalyticFunction::monomial(1), ZERO, 1, 1e-9).unwrap();
        assert_eq!(q.value(c(0.3, 0.2)).norm(), 1.0);
    }

    #[test]
    fn divide_polynomial_matches_pointwise_quotient() {
        let a = c(0.5, 0.0);
        let f = AnalyticFunction::polynomial(vec![c(-0.5, 0.0), ONE]);
        let q = divide_by_blaschke(&f, a, 1, 1e-9).unwrap();
        let AnalyticFunction::Polynomial(poly) = &q else { panic!("expected polynomial") };
        assert_eq!(poly.degree(), 1);
        let phi = MobiusMap::new(a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let z = disk_point(&mut rng, 0.99);
            if (z - a).norm() < 1e-3 {
                continue;
            }
            let direct = f.value(z) / phi.apply(z);
            assert_relative_eq!(q.value(z).norm(), direct.norm(), max_relative = 1e-12);
        }
    }

    #[test]
    fn divide_division_extremal_gives_growth_extremal() {
        let a = c(0.1, 0.6);
        let f = AnalyticFunction::division_extremal(a, 2, 1.3, 0.4).unwrap();
        let q = divide_by_blaschke(&f, a, 2, 1e-9).unwrap();
        let s = 2.4 / 1.3;
        for k in 0..10 {
            let z = Complex64::from_polar(0.1 * k as f64, 0.7 * k as f64);
            let expected = (1.0 - a.norm_sqr()).powf(s) / (ONE - a.conj() * z).norm().powf(2.0 * s);
            assert_relative_eq!(q.value(z).norm(), expected, max_relative = 1e-13);
        }
        let partial = divide_by_blaschke(&f, a, 1, 1e-9).unwrap();
        assert!(partial.value(a).norm() < 1e-15);
        assert!(divide_by_blaschke(&f, a, 3, 1e-9).is_err());
    }

    #[test]
    fn divide_closed_form_without_zero_fails() {
        let g = AnalyticFunction::growth_extremal(c(0.2, 0.0), 2.0, 0.0).unwrap();
        match divide_by_blaschke(&g, c(0.2, 0.0), 1, 1e-9) {
            Err(Error::InsufficientMultiplicity { order: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn divide_then_multiply_reproduces_modulus() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..20 {
            let a = disk_point(&mut rng, 0.7);
            let n = 1 + trial % 3;
            let g = random_poly(&mut rng, 3);
            let f = Polynomial::linear_power(-a, ONE, n).mul(&g);
            let candidates = [
                AnalyticFunction::Polynomial(f.clone()),
                apply_isometry(&AnalyticFunction::Polynomial(g.clone()), c(0.2, 0.1), 1.5, 0.0)
                    .map(|h| AnalyticFunction::Product(vec![h, AnalyticFunction::Polynomial(f.clone())]))
                    .unwrap(),
                AnalyticFunction::composition(
                    AnalyticFunction::Polynomial(Polynomial::linear_power(-MobiusMap::new(c(0.3, 0.0)).unwrap().apply(a), ONE, n).mul(&g)),
                    MobiusMap::new(c(0.3, 0.0)).unwrap(),
                ),
            ];
            let phi = MobiusMap::new(a).unwrap();
            for f in &candidates {
                let q = divide_by_blaschke(f, a, n, 1e-9).unwrap();
                for _ in 0..100 {
                    let z = disk_point(&mut rng, 0.99);
                    let back = q.value(z) * phi.apply(z).powi(n as i32);
                    let expected = f.value(z).norm();
                    assert!((back.norm() - expected).abs() <= 1e-10 * (1.0 + expected), "{f:?}");
                }
                // removable singularity: value at a is the limit
                let limit = q.value(a);
                let near = q.value(a + 1e-4 * (1.0 - a.norm()));
                assert!((limit - near).norm() <= 1e-3 * (1.0 + limit.norm()));
            }
        }
    }
}
