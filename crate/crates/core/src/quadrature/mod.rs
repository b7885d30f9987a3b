//! Integral means, weighted Bergman norms, radial moments and the Chebyshev
//! gap functional.
//!
//! The norm is `‖f‖_{p,ω}^p = ∫₀¹ 2r ω(r) M_p^p(r; f) dr`. Circle averages use
//! the periodic trapezoid rule with node doubling. The radial integral is
//! split into panels, each integrated by a Gauss-Jacobi rule:
//!
//! * for standard weights the variable is `t = r²` and the factor `(1-t)^α`
//!   lives in the rule of the last panel, so `α` close to `-1` costs nothing;
//! * a zero of order `m` at the origin makes `M_p^p` behave like `t^{mp/2}`,
//!   which goes into the rule of the first panel;
//! * zeros at other radii produce cusps of `M_p^p` when `p` is not an even
//!   integer, so panels are broken there and graded toward the break.
//!
//! Custom weights are integrated in `r` on dyadic panels `[1-2^{1-k}, 1-2^{-k}]`,
//! added until the newest panel is negligible.

mod gauss;
mod radial;
mod weight;

pub use gauss::GaussJacobi;
pub use weight::{load_weight_table, CustomWeight, RadialWeight};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::funcspace::AnalyticFunction;
use radial::{check_divergence, panels_with_singularities, Outcome, Panel, PanelIntegrator};

/// Upper limit on trapezoid nodes per circle.
pub const MAX_ANGULAR_NODES: usize = 1 << 14;

/// Deepest dyadic panel used for custom weights, `1 - 2^{-k}`.
const MAX_DYADIC_DEPTH: i32 = 52;

/// Dyadic panels always used before the tail test applies.
const MIN_DYADIC_DEPTH: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Initial trapezoid node count; a power of two.
    pub angular_nodes: usize,
    /// Initial Gauss-Jacobi node count per radial panel.
    pub radial_nodes: usize,
    pub rel_tol: f64,
    /// Number of node doublings allowed per radial panel.
    pub max_refinements: u32,
}

impl QuadratureSpec {
    pub fn new(angular_nodes: usize, radial_nodes: usize, rel_tol: f64, max_refinements: u32) -> Result<Self> {
        let spec = Self { angular_nodes, radial_nodes, rel_tol, max_refinements };
        spec.validate()?;
        Ok(spec)
    }

    /// Defaults for standard weights.
    pub fn standard() -> Self {
        Self { angular_nodes: 64, radial_nodes: 16, rel_tol: 1e-9, max_refinements: 6 }
    }

    /// Defaults for custom weights.
    pub fn custom() -> Self {
        Self { rel_tol: 1e-7, ..Self::standard() }
    }

    pub fn for_weight(w: &RadialWeight) -> Self {
        match w {
            RadialWeight::Standard { .. } => Self::standard(),
            RadialWeight::Custom(_) => Self::custom(),
        }
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Result<Self> {
        let spec = Self { rel_tol, ..self };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return domain(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol));
        }
        if self.angular_nodes < 8 || !self.angular_nodes.is_power_of_two() || self.angular_nodes > MAX_ANGULAR_NODES {
            return domain(format!(
                "angular_nodes must be a power of two in [8, {MAX_ANGULAR_NODES}], got {}",
                self.angular_nodes
            ));
        }
        if self.radial_nodes < 8 {
            return domain(format!("radial_nodes must be at least 8, got {}", self.radial_nodes));
        }
        if self.max_refinements < 1 || self.max_refinements > 12 {
            return domain(format!("max_refinements must lie in [1, 12], got {}", self.max_refinements));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::standard()
    }
}

/// A circle average together with its convergence record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralMean {
    /// `M_p(r; f)`.
    pub value: f64,
    pub nodes: usize,
    pub converged: bool,
}

struct CircleMean {
    power_mean: f64,
    nodes: usize,
    converged: bool,
}

fn abs_pow(z: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        z.norm_sqr()
    } else {
        z.norm_sqr().powf(0.5 * p)
    }
}

/// `(1/2π) ∫ |f(re^{iθ})|^p dθ` by the trapezoid rule, doubling until the
/// change is within `max(rel_tol · value, abs_tol)`.
fn circle_mean_power(f: &AnalyticFunction, r: f64, p: f64, start: usize, rel_tol: f64, abs_tol: f64) -> CircleMean {
    if r == 0.0 {
        return CircleMean { power_mean: abs_pow(f.value(Complex64::new(0.0, 0.0)), p), nodes: 1, converged: true };
    }
    let node = |k: usize, m: usize| abs_pow(f.value(Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / m as f64)), p);
    let mut m = start;
    let mut sum: f64 = (0..m).map(|k| node(k, m)).sum();
    let mut estimate = sum / m as f64;
    while m < MAX_ANGULAR_NODES {
        let refined = 2 * m;
        sum += (0..m).map(|k| node(2 * k + 1, refined)).sum::<f64>();
        m = refined;
        let next = sum / m as f64;
        let change = (next - estimate).abs();
        estimate = next;
        if change <= (rel_tol * next).max(abs_tol) {
            return CircleMean { power_mean: estimate, nodes: m, converged: true };
        }
    }
    CircleMean { power_mean: estimate, nodes: m, converged: false }
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        domain(format!("exponent p must be finite and positive, got {p}"))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        domain(format!("radius r = {r} must lie in [0, 1)"))
    }
}

/// `M_p(r; f)`.
pub fn integral_means(f: &AnalyticFunction, r: f64, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(integral_means_detailed(f, r, p, spec)?.value)
}

pub fn integral_means_detailed(f: &AnalyticFunction, r: f64, p: f64, spec: &QuadratureSpec) -> Result<IntegralMean> {
    spec.validate()?;
    check_radius(r)?;
    check_exponent(p)?;
    let mean = circle_mean_power(f, r, p, spec.angular_nodes, spec.rel_tol, 0.0);
    Ok(IntegralMean { value: mean.power_mean.powf(1.0 / p), nodes: mean.nodes, converged: mean.converged })
}

/// A Bergman norm together with its convergence record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub norm: f64,
    /// `‖f‖^p`.
    pub integral: f64,
    /// Summed last change of the radial panels, relative to the integral.
    pub rel_change: f64,
    pub converged: bool,
    pub radial_evaluations: usize,
    /// Circles on which the trapezoid rule reached the node cap.
    pub angular_cap_hits: usize,
}

/// `‖f‖_{p,ω}`.
pub fn bergman_norm(f: &AnalyticFunction, p: f64, w: &RadialWeight, spec: &QuadratureSpec) -> Result<f64> {
    Ok(bergman_norm_detailed(f, p, w, spec)?.norm)
}

pub fn bergman_norm_detailed(
    f: &AnalyticFunction,
    p: f64,
    w: &RadialWeight,
    spec: &QuadratureSpec,
) -> Result<NormEstimate> {
    spec.validate()?;
    check_exponent(p)?;
    let zeros = f.zeros();
    let origin_order = zeros.iter().filter(|z| z.norm() <= 1e-14).count() as f64;
    let even_power = p % 2.0 == 0.0;
    let mut radii: Vec<f64> = if even_power {
        Vec::new()
    } else {
        zeros.iter().map(|z| z.norm()).filter(|&r| r > 1e-14 && r < 1.0).collect()
    };
    radii.sort_by(f64::total_cmp);
    radii.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let angular_tol = 0.1 * spec.rel_tol;
    let mut cap_hits = 0;
    let outcome = match w {
        RadialWeight::Standard { alpha } => {
            let singular: Vec<f64> = radii.iter().map(|r| r * r).collect();
            let mut integrand = |t: f64, abs_tol: f64| {
                let mean = circle_mean_power(f, t.sqrt(), p, spec.angular_nodes, angular_tol, abs_tol);
                cap_hits += usize::from(!mean.converged);
                mean.power_mean
            };
            integrate_standard(*alpha, 0.5 * origin_order * p, &singular, spec, &mut integrand)?
        }
        RadialWeight::Custom(custom) => {
            let mut integrand = |r: f64, abs_tol: f64| {
                let mean = circle_mean_power(f, r, p, spec.angular_nodes, angular_tol, abs_tol);
                cap_hits += usize::from(!mean.converged);
                mean.power_mean
            };
            integrate_custom(custom, 1.0 + origin_order * p, &radii, spec, &mut integrand)?
        }
    };
    check_divergence(&outcome, spec.rel_tol)?;
    Ok(NormEstimate {
        norm: outcome.value.powf(1.0 / p),
        integral: outcome.value,
        rel_change: outcome.rel_change,
        converged: outcome.converged,
        radial_evaluations: outcome.evaluations,
        angular_cap_hits: cap_hits,
    })
}

/// `∫₀¹ (α+1)(1-t)^α F(t) dt` where `F(t) ~ t^{left_exp}` near 0.
fn integrate_standard(
    alpha: f64,
    left_exp: f64,
    singular: &[f64],
    spec: &QuadratureSpec,
    integrand: &mut dyn FnMut(f64, f64) -> f64,
) -> Result<Outcome> {
    if !(alpha > -1.0) {
        return domain(format!("weight exponent alpha must exceed -1, got {alpha}"));
    }
    let density = move |t: f64, panel: &Panel| {
        let right = if panel.right_exp != 0.0 { 1.0 } else { (1.0 - t).powf(alpha) };
        let left = if panel.left_exp != 0.0 { t.powf(-panel.left_exp) } else { 1.0 };
        (alpha + 1.0) * right * left
    };
    let mut engine = PanelIntegrator::new(&density, spec.radial_nodes, spec.rel_tol, spec.max_refinements);
    engine.add(panels_with_singularities(0.0, 0.5, left_exp, 0.0, singular));
    engine.add(panels_with_singularities(0.5, 1.0, 0.0, alpha, singular));
    engine.run(integrand)
}

/// `∫₀¹ 2r ω(r) F(r) dr` where `2r F(r) ~ r^{left_exp}` near 0.
fn integrate_custom(
    w: &CustomWeight,
    left_exp: f64,
    singular: &[f64],
    spec: &QuadratureSpec,
    integrand: &mut dyn FnMut(f64, f64) -> f64,
) -> Result<Outcome> {
    let density = |r: f64, panel: &Panel| {
        let radial = if panel.left_exp != 0.0 { r.powf(1.0 - panel.left_exp) } else { r };
        2.0 * w.eval(r) * radial
    };
    let mut engine = PanelIntegrator::new(&density, spec.radial_nodes, spec.rel_tol, spec.max_refinements);
    engine.add(panels_with_singularities(0.0, 0.5, left_exp, 0.0, singular));
    let mut outcome = engine.run(integrand)?;
    for depth in 2..=MAX_DYADIC_DEPTH {
        let lo = 1.0 - 0.5f64.powi(depth - 1);
        let hi = 1.0 - 0.5f64.powi(depth);
        let start = engine.len();
        engine.add(panels_with_singularities(lo, hi, 0.0, 0.0, singular));
        outcome = engine.run(integrand)?;
        let newest = engine.partial_total(start);
        if depth >= MIN_DYADIC_DEPTH && newest.abs() <= spec.rel_tol * outcome.value.abs() {
            return Ok(outcome);
        }
    }
    let previous = outcome.value - engine.partial_total(engine.len().saturating_sub(1));
    Err(Error::Divergence { previous, last: outcome.value })
}

/// `∫₀¹ r^s 2r ω(r) dr`.
pub fn weighted_moment(w: &RadialWeight, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(s >= 0.0 && s.is_finite()) {
        return domain(format!("moment order s must be finite and non-negative, got {s}"));
    }
    let outcome = match w {
        RadialWeight::Standard { alpha } => {
            integrate_standard(*alpha, 0.5 * s, &[], spec, &mut |t, _| t.powf(0.5 * s))?
        }
        RadialWeight::Custom(custom) => integrate_custom(custom, 1.0 + s, &[], spec, &mut |r, _| r.powf(s))?,
    };
    check_divergence(&outcome, spec.rel_tol)?;
    Ok(outcome.value)
}

fn check_order(n: u32) -> Result<()> {
    if n == 0 {
        return domain("zero multiplicity N must be at least 1");
    }
    Ok(())
}

/// The sharp constant for dividing out an `N`-fold zero under a general radial
/// weight: `(m_0 / m_{Np})^{1/p}` with `m_s` the weighted moments.
pub fn division_bound_general(w: &RadialWeight, n: u32, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_order(n)?;
    check_exponent(p)?;
    let mass = weighted_moment(w, 0.0, spec)?;
    let moment = weighted_moment(w, f64::from(n) * p, spec)?;
    Ok((mass / moment).powf(1.0 / p))
}

fn check_non_decreasing(values: &[f64], sequence: &'static str) -> Result<()> {
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return domain(format!("{sequence}[{index}] is not finite"));
    }
    match values.windows(2).position(|w| w[1] < w[0]) {
        Some(i) => Err(Error::NotMonotone { sequence, index: i + 1 }),
        None => Ok(()),
    }
}

/// `∫fg dμ - μ(I)⁻¹ ∫f dμ ∫g dμ` for a discrete measure `μ`.
///
/// Both sequences must be non-decreasing; the result is then non-negative and
/// vanishes exactly when either sequence is constant.
pub fn chebyshev_gap(fvals: &[f64], gvals: &[f64], mu_weights: &[f64]) -> Result<f64> {
    if fvals.len() != gvals.len() || fvals.len() != mu_weights.len() {
        return domain(format!(
            "sequence lengths differ: f {}, g {}, mu {}",
            fvals.len(),
            gvals.len(),
            mu_weights.len()
        ));
    }
    if fvals.is_empty() {
        return domain("sequences are empty");
    }
    if let Some(i) = mu_weights.iter().position(|&m| !(m > 0.0 && m.is_finite())) {
        return domain(format!("mu_weights[{i}] = {} is not positive", mu_weights[i]));
    }
    check_non_decreasing(fvals, "fvals")?;
    check_non_decreasing(gvals, "gvals")?;
    let is_constant = |v: &[f64]| v.iter().all(|&x| x == v[0]);
    if is_constant(fvals) || is_constant(gvals) {
        return Ok(0.0);
    }
    let mass: f64 = mu_weights.iter().sum();
    let mean = |v: &[f64]| v.iter().zip(mu_weights).map(|(x, m)| x * m).sum::<f64>() / mass;
    let (f_bar, g_bar) = (mean(fvals), mean(gvals));
    Ok(fvals
        .iter()
        .zip(gvals)
        .zip(mu_weights)
        .map(|((f, g), m)| m * (f - f_bar) * (g - g_bar))
        .sum())
}

/// The Chebyshev gap between `r^{Np}` and `M_p^p(r; g)` against `2r ω(r) dr`,
/// sampled at `samples` midpoints of `[0, 1)`.
///
/// `M_p^p(r; g)` is checked to be non-decreasing up to a relative slack of
/// `1e-12` before the gap is formed.
pub fn radial_chebyshev_gap(
    g: &AnalyticFunction,
    n: u32,
    p: f64,
    w: &RadialWeight,
    samples: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_order(n)?;
    check_exponent(p)?;
    spec.validate()?;
    if samples < 2 {
        return domain("at least two radial samples are needed");
    }
    let h = 1.0 / samples as f64;
    let radii: Vec<f64> = (0..samples).map(|k| (k as f64 + 0.5) * h).collect();
    let powers: Vec<f64> = radii.iter().map(|r| r.powf(f64::from(n) * p)).collect();
    let mu: Vec<f64> = radii.iter().map(|&r| 2.0 * r * w.eval(r) * h).collect();
    let mut means = Vec::with_capacity(samples);
    for &r in &radii {
        means.push(circle_mean_power(g, r, p, spec.angular_nodes, spec.rel_tol, 0.0).power_mean);
    }
    let scale = means.iter().fold(0.0f64, |acc, &m| acc.max(m.abs()));
    for i in 1..means.len() {
        if means[i] < means[i - 1] - 1e-12 * scale {
            return Err(Error::NotMonotone { sequence: "integral means", index: i });
        }
        means[i] = means[i].max(means[i - 1]);
    }
    chebyshev_gap(&powers, &means, &mu)
}
