//! Numerical rediscovery of the sharp constants.
//!
//! Functions vanishing to order `N` at `a` are searched in the form
//! `f = (z - a)^N q` with `q` a polynomial, so the constraint holds exactly.
//! The objectives are scale invariant ratios, maximized by L-BFGS from
//! several random starts. Each start works on a fixed quadrature grid; the
//! winning polynomial is then re-evaluated with the adaptive norm.

mod lbfgs;
mod objective;
mod oracle;

pub use objective::GridSpec;
pub use oracle::{eigen_oracle_p2, MAX_ORACLE_DIMENSION};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::funcspace::{
    check_in_disk, divide_by_blaschke, evaluate, AnalyticFunction, Polynomial, DEFAULT_MULTIPLICITY_TOL,
};
use crate::quadrature::{bergman_norm_detailed, QuadratureSpec, RadialWeight};
use crate::specfun::{derivative_bound, sharp_constant, SharpConstantParams};
use objective::{pack, unpack, Objective};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance for recovering `q` from a reported maximizer.
const LADDER_DEFLATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProblemKind {
    /// Maximize `‖f/φ_a^N‖ / ‖f‖`.
    DivisionRatio,
    /// Maximize `|f^(N)(a)| / ‖f‖`.
    DerivativeValue,
    /// Maximize `‖f/(φ_a φ_b)‖ / ‖f‖` over `f` vanishing at `a` and `b`.
    TwoFactor { b: Complex64 },
}

/// One extremal problem in `A^p_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub n: u32,
    pub p: f64,
    pub alpha: f64,
    pub a: Complex64,
    /// Maximal degree of `f`.
    pub degree: usize,
    pub kind: ProblemKind,
}

impl ProblemSpec {
    pub fn new(n: u32, p: f64, alpha: f64, a: Complex64, degree: usize, kind: ProblemKind) -> Result<Self> {
        let problem = Self { n, p, alpha, a, degree, kind };
        problem.validate()?;
        Ok(problem)
    }

    pub fn division(n: u32, p: f64, alpha: f64, a: Complex64, degree: usize) -> Result<Self> {
        Self::new(n, p, alpha, a, degree, ProblemKind::DivisionRatio)
    }

    pub fn derivative(n: u32, p: f64, alpha: f64, a: Complex64, degree: usize) -> Result<Self> {
        Self::new(n, p, alpha, a, degree, ProblemKind::DerivativeValue)
    }

    pub fn two_factor(a: Complex64, b: Complex64, p: f64, alpha: f64, degree: usize) -> Result<Self> {
        Self::new(1, p, alpha, a, degree, ProblemKind::TwoFactor { b })
    }

    pub fn validate(&self) -> Result<()> {
        SharpConstantParams::new(self.n, self.p, self.alpha)?;
        check_in_disk(self.a, "a")?;
        if let ProblemKind::TwoFactor { b } = self.kind {
            check_in_disk(b, "b")?;
            if b == self.a {
                return domain("the two zeros a and b must differ");
            }
        }
        if self.degree < self.order() {
            return domain(format!("degree {} must be at least {}", self.degree, self.order()));
        }
        Ok(())
    }

    /// Number of prescribed zeros.
    fn order(&self) -> usize {
        match self.kind {
            ProblemKind::TwoFactor { .. } => 2,
            _ => self.n as usize,
        }
    }

    /// Number of free coefficients of `q`.
    pub(crate) fn q_len(&self) -> usize {
        self.degree - self.order() + 1
    }

    /// The fixed factor of `f`.
    fn vanishing_factor(&self) -> Polynomial {
        match self.kind {
            ProblemKind::TwoFactor { b } => Polynomial::linear(-self.a, ONE).mul(&Polynomial::linear(-b, ONE)),
            _ => Polynomial::linear_power(-self.a, ONE, self.n),
        }
    }

    /// The fixed factor of `f / φ_a^N` (respectively `f / (φ_a φ_b)`).
    fn quotient_factor(&self) -> Polynomial {
        match self.kind {
            ProblemKind::TwoFactor { b } => {
                Polynomial::linear(ONE, -self.a.conj()).mul(&Polynomial::linear(ONE, -b.conj()))
            }
            _ => {
                let sign = if self.n.is_multiple_of(2) { ONE } else { -ONE };
                Polynomial::linear_power(ONE, -self.a.conj(), self.n).scaled(sign)
            }
        }
    }

    /// The proven sharp value, absent for the two-factor problem.
    pub fn theory_value(&self) -> Result<Option<f64>> {
        let params = SharpConstantParams::new(self.n, self.p, self.alpha)?;
        Ok(match self.kind {
            ProblemKind::DivisionRatio => Some(sharp_constant(params)),
            ProblemKind::DerivativeValue => Some(derivative_bound(params, self.a)?),
            ProblemKind::TwoFactor { .. } => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub starts: usize,
    pub seed: u64,
    /// Run the starts on separate threads; the result does not depend on it.
    pub parallel: bool,
    pub max_iterations: usize,
    pub grid: GridSpec,
    /// Quadrature for the final, reported value.
    pub final_spec: QuadratureSpec,
    /// Coefficients of `q` used for the first starts instead of random draws.
    pub initial_guesses: Vec<Vec<Complex64>>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            starts: 16,
            seed: 0,
            parallel: false,
            max_iterations: 400,
            grid: GridSpec::default(),
            final_spec: QuadratureSpec::standard(),
            initial_guesses: Vec::new(),
        }
    }
}

impl SearchConfig {
    pub fn new(starts: usize, seed: u64) -> Self {
        Self { starts, seed, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub attained_value: f64,
    /// Coefficients of the maximizer `f`, ascending, scaled to unit norm.
    pub coefficients: Vec<Complex64>,
    pub theory_value: Option<f64>,
    /// `(theory - attained) / theory`.
    pub relative_gap: Option<f64>,
    /// `C(1,p,α)²`, the bound from dividing one factor at a time (two-factor only).
    pub product_bound: Option<f64>,
    pub n_starts: usize,
    pub converged: bool,
    /// L-BFGS iterations of the winning start.
    pub iterations: usize,
    pub best_start: usize,
    /// Grid value reached by every start, in start order.
    pub local_values: Vec<f64>,
}

impl SearchResult {
    /// The maximizer as an analytic function.
    pub fn maximizer(&self) -> AnalyticFunction {
        AnalyticFunction::polynomial(self.coefficients.clone())
    }
}

struct StartOutcome {
    q: Vec<Complex64>,
    grid_value: f64,
    iterations: usize,
    converged: bool,
}

fn random_start(dim: usize, seed: u64, index: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect()
}

fn run_start(objective: &Objective, config: &SearchConfig, index: usize) -> StartOutcome {
    let dim = objective.dim();
    let q0 = match config.initial_guesses.get(index) {
        Some(guess) => {
            let mut q = guess.clone();
            q.resize(dim, Complex64::new(0.0, 0.0));
            q
        }
        None => random_start(dim, config.seed, index),
    };
    let result = lbfgs::minimize(|x, g| objective.negated(x, g), pack(&q0), config.max_iterations);
    StartOutcome {
        q: unpack(&result.x),
        grid_value: (-result.value).exp(),
        iterations: result.iterations,
        converged: result.converged,
    }
}

/// Multi-start maximization for any problem kind.
pub fn search(problem: &ProblemSpec, config: &SearchConfig) -> Result<SearchResult> {
    problem.validate()?;
    config.final_spec.validate()?;
    if config.starts == 0 {
        return domain("at least one start is required");
    }
    if config.grid.radial_nodes < 8 || config.grid.angular_nodes < 8 {
        return domain("search grid needs at least 8 radial and 8 angular nodes");
    }
    let objective = Objective::new(problem, config.grid)?;
    let outcomes: Vec<StartOutcome> = if config.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..config.starts)
                .map(|i| {
                    let objective = &objective;
                    scope.spawn(move || run_start(objective, config, i))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("search thread panicked")).collect()
        })
    } else {
        (0..config.starts).map(|i| run_start(&objective, config, i)).collect()
    };

    let mut best = 0;
    for (i, outcome) in outcomes.iter().enumerate() {
        if outcome.grid_value > outcomes[best].grid_value || !outcomes[best].grid_value.is_finite() {
            best = i;
        }
    }
    let winner = &outcomes[best];
    let (attained_value, coefficients, final_converged) = final_value(problem, &winner.q, &config.final_spec)?;
    let theory_value = problem.theory_value()?;
    let product_bound = match problem.kind {
        ProblemKind::TwoFactor { .. } => {
            Some(sharp_constant(SharpConstantParams::new(1, problem.p, problem.alpha)?).powi(2))
        }
        _ => None,
    };
    Ok(SearchResult {
        attained_value,
        coefficients,
        theory_value,
        relative_gap: theory_value.map(|t| (t - attained_value) / t),
        product_bound,
        n_starts: config.starts,
        converged: final_converged && outcomes.iter().any(|o| o.converged),
        iterations: winner.iterations,
        best_start: best,
        local_values: outcomes.iter().map(|o| o.grid_value).collect(),
    })
}

/// Adaptive-quadrature objective value and the normalized coefficients of `f`.
fn final_value(problem: &ProblemSpec, q: &[Complex64], spec: &QuadratureSpec) -> Result<(f64, Vec<Complex64>, bool)> {
    let weight = RadialWeight::standard(problem.alpha)?;
    let q_poly = Polynomial::new(q.to_vec());
    let f = problem.vanishing_factor().mul(&q_poly);
    let f_norm = bergman_norm_detailed(&AnalyticFunction::Polynomial(f.clone()), problem.p, &weight, spec)?;
    let (value, converged) = match problem.kind {
        ProblemKind::DivisionRatio | ProblemKind::TwoFactor { .. } => {
            let g = problem.quotient_factor().mul(&q_poly);
            let g_norm = bergman_norm_detailed(&AnalyticFunction::Polynomial(g), problem.p, &weight, spec)?;
            (g_norm.norm / f_norm.norm, g_norm.converged && f_norm.converged)
        }
        ProblemKind::DerivativeValue => {
            let factorial = crate::funcspace::series::factorial(problem.n as usize);
            (factorial * q_poly.eval(problem.a).norm() / f_norm.norm, f_norm.converged)
        }
    };
    let mut coefficients: Vec<Complex64> = f.coeffs().iter().map(|c| c / f_norm.norm).collect();
    let lead = coefficients.iter().copied().fold(Complex64::new(0.0, 0.0), |m, c| if c.norm() > m.norm() { c } else { m });
    if lead.norm() > 0.0 {
        let phase = lead.conj() / lead.norm();
        for c in &mut coefficients {
            *c *= phase;
        }
    }
    coefficients.resize(problem.degree + 1, Complex64::new(0.0, 0.0));
    Ok((value, coefficients, converged))
}

fn require_kind(problem: &ProblemSpec, expected: &str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        domain(format!("expected a {expected} problem, got {:?}", problem.kind))
    }
}

/// Maximizes `‖f/φ_a^N‖ / ‖f‖`.
pub fn search_division(problem: &ProblemSpec, starts: usize, seed: u64) -> Result<SearchResult> {
    require_kind(problem, "division", problem.kind == ProblemKind::DivisionRatio)?;
    search(problem, &SearchConfig::new(starts, seed))
}

/// Maximizes `|f^(N)(a)| / ‖f‖`.
pub fn search_derivative(problem: &ProblemSpec, starts: usize, seed: u64) -> Result<SearchResult> {
    require_kind(problem, "derivative", problem.kind == ProblemKind::DerivativeValue)?;
    search(problem, &SearchConfig::new(starts, seed))
}

/// Maximizes `‖f/(φ_a φ_b)‖ / ‖f‖`, for which no sharp value is known.
pub fn explore_two_factor(problem: &ProblemSpec, starts: usize, seed: u64) -> Result<SearchResult> {
    require_kind(problem, "two-factor", matches!(problem.kind, ProblemKind::TwoFactor { .. }))?;
    search(problem, &SearchConfig::new(starts, seed))
}

/// Searches over increasing degrees, seeding each run with the previous maximizer.
pub fn degree_ladder(problem: &ProblemSpec, degrees: &[usize], config: &SearchConfig) -> Result<Vec<SearchResult>> {
    let mut results: Vec<SearchResult> = Vec::with_capacity(degrees.len());
    for &degree in degrees {
        let step = ProblemSpec { degree, ..*problem };
        step.validate()?;
        let mut config = config.clone();
        if let Some(previous) = results.last() {
            let f = Polynomial::new(previous.coefficients.clone());
            let q = match problem.kind {
                ProblemKind::TwoFactor { b } => f.deflate(problem.a, 1, LADDER_DEFLATION_TOL)?.deflate(b, 1, LADDER_DEFLATION_TOL)?,
                _ => f.deflate(problem.a, problem.n, LADDER_DEFLATION_TOL)?,
            };
            config.initial_guesses.insert(0, q.coeffs().to_vec());
        }
        results.push(search(&step, &config)?);
    }
    Ok(results)
}

/// Relative deviations reported by [`verify_extremal`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviations {
    /// `‖f‖ / ‖z^N‖` against 1.
    pub norm: f64,
    /// `‖f/φ_a^N‖` against 1.
    pub quotient: f64,
    /// `‖f/φ_a^N‖ / ‖f‖` against the sharp constant.
    pub ratio: f64,
    /// `|f^(N)(a)| / ‖f‖` against the derivative bound.
    pub derivative: f64,
}

impl Deviations {
    pub fn max(&self) -> f64 {
        self.norm.max(self.quotient).max(self.ratio).max(self.derivative)
    }
}

/// Quadrature check of the closed-form extremal function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n: u32,
    pub p: f64,
    pub alpha: f64,
    pub a: Complex64,
    /// `‖f‖ / ‖z^N‖`, expected to be 1.
    pub norm_f: f64,
    pub raw_norm: f64,
    pub monomial_norm: f64,
    pub quotient_norm: f64,
    pub ratio: f64,
    pub constant: f64,
    pub deriv_check: f64,
    pub derivative_bound: f64,
    pub deviations: Deviations,
    /// Whether every norm met the quadrature tolerance.
    pub converged: bool,
}

fn relative_deviation(value: f64, target: f64) -> f64 {
    ((value - target) / target).abs()
}

/// Evaluates the extremal function `f = (a-z)^N (1-|a|²)^s (1-conj(a)z)^{-N-2s}`
/// by quadrature and compares it with the closed-form constants.
pub fn verify_extremal(n: u32, p: f64, alpha: f64, a: Complex64, spec: &QuadratureSpec) -> Result<VerifyReport> {
    let params = SharpConstantParams::new(n, p, alpha)?;
    let weight = RadialWeight::standard(alpha)?;
    let f = AnalyticFunction::division_extremal(a, n, p, alpha)?;
    let f_norm = bergman_norm_detailed(&f, p, &weight, spec)?;
    let monomial = bergman_norm_detailed(&AnalyticFunction::monomial(n as usize), p, &weight, spec)?;
    let quotient = divide_by_blaschke(&f, a, n, DEFAULT_MULTIPLICITY_TOL)?;
    let quotient_norm = bergman_norm_detailed(&quotient, p, &weight, spec)?;

    let constant = sharp_constant(params);
    let bound = derivative_bound(params, a)?;
    let norm_f = f_norm.norm / monomial.norm;
    let ratio = quotient_norm.norm / f_norm.norm;
    let deriv_check = evaluate(&f, a, n as usize)?.norm() / f_norm.norm;
    Ok(VerifyReport {
        n,
        p,
        alpha,
        a,
        norm_f,
        raw_norm: f_norm.norm,
        monomial_norm: monomial.norm,
        quotient_norm: quotient_norm.norm,
        ratio,
        constant,
        deriv_check,
        derivative_bound: bound,
        deviations: Deviations {
            norm: relative_deviation(norm_f, 1.0),
            quotient: relative_deviation(quotient_norm.norm, 1.0),
            ratio: relative_deviation(ratio, constant),
            derivative: relative_deviation(deriv_check, bound),
        },
        converged: f_norm.converged && monomial.converged && quotient_norm.converged,
    })
}

#[cfg(test)]
mod tests;
