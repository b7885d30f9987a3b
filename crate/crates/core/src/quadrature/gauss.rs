//! Gauss-Jacobi rules on `[-1, 1]` for the weight `(1 - x)^a (1 + x)^b`.
//!
//! Nodes and weights come from the Golub-Welsch eigenvalue problem for the
//! Jacobi recurrence matrix. Only the first component of each eigenvector is
//! needed, so the implicit QL sweep tracks that single row.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{domain, Result};
use crate::specfun::log_beta;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussJacobi {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Rules keyed by node count and the bit patterns of both exponents.
type RuleCache = HashMap<(usize, u64, u64), Arc<GaussJacobi>>;

impl GaussJacobi {
    /// `n`-point rule for `∫_{-1}^{1} (1-x)^right (1+x)^left g(x) dx`.
    pub fn new(n: usize, right: f64, left: f64) -> Result<Self> {
        if n == 0 {
            return domain("Gauss-Jacobi rule needs at least one node");
        }
        if !(right > -1.0 && left > -1.0 && right.is_finite() && left.is_finite()) {
            return domain(format!("Jacobi exponents must exceed -1, got ({right}, {left})"));
        }
        let (a, b) = (right, left);
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n];
        diag[0] = (b - a) / (a + b + 2.0);
        for k in 1..n {
            let kf = k as f64;
            let s = 2.0 * kf + a + b;
            diag[k] = (b * b - a * a) / (s * (s + 2.0));
            off[k - 1] = if k == 1 {
                (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))).sqrt()
            } else {
                (4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
            };
        }
        let mut first_row = vec![0.0; n];
        first_row[0] = 1.0;
        tridiagonal_ql(&mut diag, &mut off, &mut first_row)?;

        let total_mass = total_mass(a, b)?;
        let mut pairs: Vec<(f64, f64)> = diag
            .into_iter()
            .zip(first_row.into_iter().map(|v| total_mass * v * v))
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self { nodes, weights })
    }

    /// Shared rule from a process-wide cache.
    pub fn cached(n: usize, right: f64, left: f64) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<RuleCache>> = OnceLock::new();
        let key = (n, right.to_bits(), left.to_bits());
        let cache = CACHE.get_or_init(Default::default);
        if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(Self::new(n, right, left)?);
        cache.lock().expect("rule cache poisoned").insert(key, Arc::clone(&rule));
        Ok(rule)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }
}

/// `∫_{-1}^{1} (1-x)^a (1+x)^b dx`; elementary when either exponent vanishes.
fn total_mass(a: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Ok(2f64.powf(a + 1.0) / (a + 1.0));
    }
    if a == 0.0 {
        return Ok(2f64.powf(b + 1.0) / (b + 1.0));
    }
    Ok(((a + b + 1.0) * std::f64::consts::LN_2 + log_beta(a + 1.0, b + 1.0)?).exp())
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// On return `diag` holds the eigenvalues and `row` the first component of
/// each eigenvector (given `row` started as the first unit vector).
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], row: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n > 0 {
        off[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 100 {
                return domain("tridiagonal eigenvalue iteration did not converge");
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let f = row[i + 1];
                row[i + 1] = s * row[i] + c * f;
                row[i] = c * row[i] - s * f;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
