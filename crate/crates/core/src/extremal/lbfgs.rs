//! Limited-memory BFGS with a backtracking Armijo line search.

use std::collections::VecDeque;

const MEMORY: usize = 8;
const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;
/// Scaled gradient norm `‖∇f‖·‖x‖` treated as stationary.
const GRADIENT_TOL: f64 = 1e-10;
/// Scaled gradient norm accepted as stationary when the line search stalls.
const STALL_GRADIENT_TOL: f64 = 1e-6;
const STAGNATION_TOL: f64 = 1e-15;
const STAGNATION_ROUNDS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Minimizes a scale-invariant objective `f(x, grad) -> value`.
///
/// Because `f(cx) = f(x)`, the iterate is rescaled to unit length whenever
/// its norm drifts far from one; the curvature memory is dropped then.
pub(crate) fn minimize<F>(mut objective: F, x0: Vec<f64>, max_iterations: usize) -> Minimum
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let dim = x0.len();
    let mut x = x0;
    let mut grad = vec![0.0; dim];
    let mut value = objective(&x, &mut grad);
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(MEMORY);
    let mut stagnant = 0;
    let mut trial = vec![0.0; dim];
    let mut trial_grad = vec![0.0; dim];

    for iteration in 0..max_iterations {
        if !value.is_finite() {
            return Minimum { x, value, iterations: iteration, converged: false };
        }
        let scaled_gradient = norm(&grad) * norm(&x);
        if scaled_gradient <= GRADIENT_TOL {
            return Minimum { x, value, iterations: iteration, converged: true };
        }

        let mut direction = two_loop(&grad, &memory);
        if dot(&direction, &grad) >= 0.0 {
            memory.clear();
            direction = grad.iter().map(|g| -g).collect();
        }
        let mut step = if memory.is_empty() { norm(&x).max(1e-3) * 1e-2 / norm(&direction) } else { 1.0 };
        let slope = dot(&direction, &grad);
        let mut accepted = false;
        let mut trial_value = value;
        for _ in 0..MAX_BACKTRACKS {
            for i in 0..dim {
                trial[i] = x[i] + step * direction[i];
            }
            trial_value = objective(&trial, &mut trial_grad);
            if trial_value.is_finite() && trial_value <= value + ARMIJO * step * slope {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return Minimum { x, value, iterations: iteration, converged: scaled_gradient <= STALL_GRADIENT_TOL };
        }

        let s: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = trial_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            if memory.len() == MEMORY {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }
        let improvement = value - trial_value;
        x.copy_from_slice(&trial);
        grad.copy_from_slice(&trial_grad);
        value = trial_value;

        if improvement <= STAGNATION_TOL * value.abs().max(1.0) {
            stagnant += 1;
            if stagnant >= STAGNATION_ROUNDS {
                return Minimum { x, value, iterations: iteration + 1, converged: true };
            }
        } else {
            stagnant = 0;
        }

        let length = norm(&x);
        if !(1e-4..=1e4).contains(&length) {
            for xi in &mut x {
                *xi /= length;
            }
            for gi in &mut grad {
                *gi *= length;
            }
            memory.clear();
        }
    }
    Minimum { x, value, iterations: max_iterations, converged: false }
}

fn two_loop(grad: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = grad.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        for qi in &mut q {
            *qi *= gamma;
        }
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter().map(|v| -v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rayleigh_quotient_minimum() {
        // min x'Ax / x'x for A = diag(1, 2, 5) is 1 along e_1.
        let diag = [5.0, 2.0, 1.0];
        let objective = |x: &[f64], g: &mut [f64]| {
            let num: f64 = x.iter().zip(&diag).map(|(v, d)| d * v * v).sum();
            let den: f64 = x.iter().map(|v| v * v).sum();
            for i in 0..3 {
                g[i] = 2.0 * x[i] * (diag[i] * den - num) / (den * den);
            }
            num / den
        };
        let result = minimize(objective, vec![1.0, 1.0, 1.0], 200);
        assert!(result.converged);
        assert!((result.value - 1.0).abs() < 1e-12);
        assert!(result.x[2].abs() > 1e3 * result.x[0].abs().max(result.x[1].abs()));
    }
}
