//! Fixed-grid objectives for the polynomial searches.
//!
//! The searched functions are `f = P·q` with a fixed factor `P` vanishing at
//! `a` (and `b`). Norms are approximated on tensor grids of Gauss-Jacobi
//! radial nodes times equispaced angles. The norm of `f` itself is taken
//! after the change of variables `z = φ_a(w)`, which moves the zero at `a` to
//! the origin where the radial rule absorbs it exactly.

use num_complex::Complex64;

use crate::error::Result;
use crate::funcspace::MobiusMap;
use crate::quadrature::GaussJacobi;

use super::{ProblemKind, ProblemSpec};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Grid resolution for the inner objective.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    /// Gauss-Jacobi nodes on each of the two radial panels.
    pub radial_nodes: usize,
    /// Equispaced angles per circle.
    pub angular_nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { radial_nodes: 48, angular_nodes: 128 }
    }
}

/// `‖P·q‖^p ≈ Σ_j weight_j |prefactor_j q(point_j)|^p`.
#[derive(Debug, Clone)]
pub(crate) struct Grid {
    points: Vec<Complex64>,
    prefactors: Vec<Complex64>,
    weights: Vec<f64>,
}

/// Nodes `w` and weights for `∫ F dA_α` when `F(w) ~ |w|^{2 left_exp}` at the origin.
///
/// The weights include the factor `|w|^{2 left_exp}`, so the caller supplies
/// `F(w) / |w|^{2 left_exp}`.
fn base_grid(alpha: f64, left_exp: f64, grid: GridSpec) -> Result<Vec<(Complex64, f64)>> {
    let mut nodes = Vec::with_capacity(2 * grid.radial_nodes * grid.angular_nodes);
    let panels = [(0.0, 0.5, 0.0, left_exp), (0.5, 1.0, alpha, 0.0)];
    for (lo, hi, right, left) in panels {
        let rule = GaussJacobi::cached(grid.radial_nodes, right, left)?;
        let half: f64 = 0.5 * (hi - lo);
        let scale = half.powf(right + left + 1.0) / grid.angular_nodes as f64;
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            let t = if x <= 0.0 { lo + half * (1.0 + x) } else { hi - half * (1.0 - x) };
            let edge = if right != 0.0 { 1.0 } else { (1.0 - t).powf(alpha) };
            let origin = if left != 0.0 { 1.0 } else { t.powf(left_exp) };
            let weight = scale * w * (alpha + 1.0) * edge * origin;
            let r = t.sqrt();
            for k in 0..grid.angular_nodes {
                let theta = std::f64::consts::TAU * k as f64 / grid.angular_nodes as f64;
                nodes.push((Complex64::from_polar(r, theta), weight));
            }
        }
    }
    Ok(nodes)
}

impl Grid {
    /// Grid for `‖f‖` with `f = P·q`, pulled back through `φ_a`.
    ///
    /// `reduced(w)` must return `P(φ_a(w)) / w^m` with `m` the order of `P` at `a`.
    fn pulled_back(
        problem: &ProblemSpec,
        order: u32,
        grid: GridSpec,
        reduced: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        let map = MobiusMap::new(problem.a)?;
        let left_exp = 0.5 * f64::from(order) * problem.p;
        let jacobian_power = 2.0 + problem.alpha;
        let base = base_grid(problem.alpha, left_exp, grid)?;
        let mut out = Self::with_capacity(base.len());
        for (w, weight) in base {
            let z = map.apply(w);
            out.points.push(z);
            out.prefactors.push(reduced(w, z));
            out.weights.push(weight * map.derivative(w).norm().powf(jacobian_power));
        }
        Ok(out)
    }

    /// Grid for `‖P·q‖` in the original variable.
    fn direct(problem: &ProblemSpec, grid: GridSpec, prefactor: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        let base = base_grid(problem.alpha, 0.0, grid)?;
        let mut out = Self::with_capacity(base.len());
        for (z, weight) in base {
            out.points.push(z);
            out.prefactors.push(prefactor(z));
            out.weights.push(weight);
        }
        Ok(out)
    }

    fn with_capacity(n: usize) -> Self {
        Self { points: Vec::with_capacity(n), prefactors: Vec::with_capacity(n), weights: Vec::with_capacity(n) }
    }

    /// Returns `S = Σ w|u|^p` and adds `Σ w|u|^{p-2} u conj(P z^k)` into `acc`.
    fn power_sum(&self, q: &[Complex64], p: f64, acc: Option<&mut [Complex64]>) -> f64 {
        let mut total = 0.0;
        let mut acc = acc;
        for ((&z, &pre), &w) in self.points.iter().zip(&self.prefactors).zip(&self.weights) {
            let qz = q.iter().rev().fold(Complex64::new(0.0, 0.0), |s, &c| s * z + c);
            let u = pre * qz;
            let modulus_sq = u.norm_sqr();
            if modulus_sq == 0.0 {
                continue;
            }
            let power = if p == 2.0 { modulus_sq } else { modulus_sq.powf(0.5 * p) };
            total += w * power;
            if let Some(acc) = acc.as_deref_mut() {
                let gamma = u * pre.conj() * (w * power / modulus_sq);
                let zc = z.conj();
                let mut zk = ONE;
                for slot in acc.iter_mut() {
                    *slot += gamma * zk;
                    zk *= zc;
                }
            }
        }
        total
    }
}

/// `log(objective)` on the fixed grids, as a function of `q`'s coefficients.
pub(crate) struct Objective {
    p: f64,
    denominator: Grid,
    numerator: Numerator,
    dim: usize,
}

enum Numerator {
    Norm(Grid),
    /// `N! |q(a)|`.
    PointValue { a: Complex64, log_scale: f64 },
}

impl Objective {
    pub fn new(problem: &ProblemSpec, grid: GridSpec) -> Result<Self> {
        let a = problem.a;
        let shrink = 1.0 - a.norm_sqr();
        let n = problem.n as i32;
        let sign = if problem.n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let (denominator, numerator) = match problem.kind {
            ProblemKind::DivisionRatio => (
                Grid::pulled_back(problem, problem.n, grid, |w, _| (-shrink / (ONE - a.conj() * w)).powi(n))?,
                Numerator::Norm(Grid::direct(problem, grid, |z| (ONE - a.conj() * z).powi(n) * sign)?),
            ),
            ProblemKind::DerivativeValue => (
                Grid::pulled_back(problem, problem.n, grid, |w, _| (-shrink / (ONE - a.conj() * w)).powi(n))?,
                Numerator::PointValue { a, log_scale: crate::funcspace::series::factorial(problem.n as usize).ln() },
            ),
            ProblemKind::TwoFactor { b } => (
                Grid::pulled_back(problem, 1, grid, |w, z| -shrink / (ONE - a.conj() * w) * (z - b))?,
                Numerator::Norm(Grid::direct(problem, grid, |z| (ONE - a.conj() * z) * (ONE - b.conj() * z))?),
            ),
        };
        Ok(Self { p: problem.p, denominator, numerator, dim: problem.q_len() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `log R(q)` and, when requested, `∂ log R / ∂ conj(q_k)`.
    pub fn log_value(&self, q: &[Complex64], grad: Option<&mut [Complex64]>) -> f64 {
        let p = self.p;
        let mut denom_acc = vec![Complex64::new(0.0, 0.0); self.dim];
        let want_grad = grad.is_some();
        let denom = self.denominator.power_sum(q, p, want_grad.then_some(&mut denom_acc[..]));
        let mut numer_acc = vec![Complex64::new(0.0, 0.0); self.dim];
        let numer_log = match &self.numerator {
            Numerator::Norm(grid) => {
                let s = grid.power_sum(q, p, want_grad.then_some(&mut numer_acc[..]));
                for v in &mut numer_acc {
                    *v /= 2.0 * s;
                }
                s.ln() / p
            }
            Numerator::PointValue { a, log_scale } => {
                let mut ak = ONE;
                let mut qa = Complex64::new(0.0, 0.0);
                for &c in q {
                    qa += c * ak;
                    ak *= a;
                }
                let ac = a.conj();
                let mut ak = ONE;
                for v in &mut numer_acc {
                    *v = qa * ak / (2.0 * qa.norm_sqr());
                    ak *= ac;
                }
                log_scale + qa.norm().ln()
            }
        };
        if let Some(grad) = grad {
            for ((g, n), d) in grad.iter_mut().zip(&numer_acc).zip(&denom_acc) {
                *g = n - d / (2.0 * denom);
            }
        }
        numer_log - denom.ln() / p
    }

    /// Objective for the minimizer: `-log R` over interleaved real coordinates.
    pub fn negated(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let q = unpack(x);
        let mut wirtinger = vec![Complex64::new(0.0, 0.0); self.dim];
        let value = self.log_value(&q, Some(&mut wirtinger));
        for (k, g) in wirtinger.iter().enumerate() {
            grad[2 * k] = -2.0 * g.re;
            grad[2 * k + 1] = -2.0 * g.im;
        }
        -value
    }
}

pub(crate) fn unpack(x: &[f64]) -> Vec<Complex64> {
    x.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

pub(crate) fn pack(q: &[Complex64]) -> Vec<f64> {
    q.iter().flat_map(|c| [c.re, c.im]).collect()
}
