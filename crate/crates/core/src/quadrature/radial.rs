//! Panel-wise Gauss-Jacobi integration with per-panel node doubling.
//!
//! Each panel `[lo, hi]` may carry endpoint factors `(hi - y)^right (y - lo)^left`
//! that are built into its Gauss-Jacobi rule. The caller supplies the density
//! with those factors already divided out, plus the integrand `F(y)`.
//! Panels stop refining once their change drops below their share of the
//! global tolerance, so tiny panels near singular points freeze early.

use crate::error::{Error, Result};

use super::gauss::GaussJacobi;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Panel {
    pub lo: f64,
    pub hi: f64,
    pub right_exp: f64,
    pub left_exp: f64,
}

/// Ratio of successive widths when grading panels toward a singular point.
const GRADING_RATIO: f64 = 0.25;
/// Number of graded panels on each side of a singular point.
const GRADING_LEVELS: i32 = 12;

/// Splits `[lo, hi]` into panels graded geometrically toward the flagged ends.
///
/// The endpoint exponents stay on the sub-panels touching `lo` and `hi`.
pub(crate) fn graded_panels(base: Panel, toward_lo: bool, toward_hi: bool) -> Vec<Panel> {
    let Panel { lo, hi, right_exp, left_exp } = base;
    match (toward_lo, toward_hi) {
        (false, false) => vec![base],
        (true, true) => {
            let mid = 0.5 * (lo + hi);
            let mut panels = graded_panels(Panel { lo, hi: mid, right_exp: 0.0, left_exp }, true, false);
            panels.extend(graded_panels(Panel { lo: mid, hi, right_exp, left_exp: 0.0 }, false, true));
            panels
        }
        (true, false) => {
            let width = hi - lo;
            let mut cuts: Vec<f64> = (1..=GRADING_LEVELS).rev().map(|k| lo + width * GRADING_RATIO.powi(k)).collect();
            cuts.insert(0, lo);
            cuts.push(hi);
            cuts.windows(2)
                .enumerate()
                .map(|(i, w)| Panel {
                    lo: w[0],
                    hi: w[1],
                    left_exp: if i == 0 { left_exp } else { 0.0 },
                    right_exp: if i == cuts.len() - 2 { right_exp } else { 0.0 },
                })
                .collect()
        }
        (false, true) => {
            let width = hi - lo;
            let mut cuts: Vec<f64> = (1..=GRADING_LEVELS).map(|k| hi - width * GRADING_RATIO.powi(k)).collect();
            cuts.insert(0, lo);
            cuts.push(hi);
            cuts.windows(2)
                .enumerate()
                .map(|(i, w)| Panel {
                    lo: w[0],
                    hi: w[1],
                    left_exp: if i == 0 { left_exp } else { 0.0 },
                    right_exp: if i == cuts.len() - 2 { right_exp } else { 0.0 },
                })
                .collect()
        }
    }
}

/// Breaks `[lo, hi]` at the interior singular points and grades toward each.
pub(crate) fn panels_with_singularities(
    lo: f64,
    hi: f64,
    left_exp: f64,
    right_exp: f64,
    singular: &[f64],
) -> Vec<Panel> {
    let mut cuts = vec![lo];
    let mut flagged = vec![false];
    for &s in singular {
        if s > lo && s < hi {
            cuts.push(s);
            flagged.push(true);
        }
    }
    cuts.push(hi);
    flagged.push(singular.contains(&hi));
    flagged[0] = singular.contains(&lo);
    let last = cuts.len() - 2;
    let mut panels = Vec::new();
    for i in 0..=last {
        let base = Panel {
            lo: cuts[i],
            hi: cuts[i + 1],
            left_exp: if i == 0 { left_exp } else { 0.0 },
            right_exp: if i == last { right_exp } else { 0.0 },
        };
        panels.extend(graded_panels(base, flagged[i], flagged[i + 1]));
    }
    panels
}

#[derive(Debug, Clone, Copy)]
struct PanelState {
    panel: Panel,
    value: f64,
    change: f64,
    level: Option<u32>,
    frozen: bool,
}

/// Summary of a panel integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Outcome {
    pub value: f64,
    pub previous: f64,
    pub rel_change: f64,
    pub converged: bool,
    pub max_level: u32,
    pub evaluations: usize,
}

pub(crate) struct PanelIntegrator<'a> {
    density: &'a dyn Fn(f64, &Panel) -> f64,
    panels: Vec<PanelState>,
    initial_nodes: usize,
    rel_tol: f64,
    max_refinements: u32,
    evaluations: usize,
}

impl<'a> PanelIntegrator<'a> {
    pub fn new(
        density: &'a dyn Fn(f64, &Panel) -> f64,
        initial_nodes: usize,
        rel_tol: f64,
        max_refinements: u32,
    ) -> Self {
        Self { density, panels: Vec::new(), initial_nodes, rel_tol, max_refinements, evaluations: 0 }
    }

    pub fn add(&mut self, panels: impl IntoIterator<Item = Panel>) {
        self.panels.extend(
            panels
                .into_iter()
                .filter(|p| p.hi > p.lo)
                .map(|panel| PanelState { panel, value: 0.0, change: 0.0, level: None, frozen: false }),
        );
    }

    pub fn total(&self) -> f64 {
        self.panels.iter().map(|s| s.value).sum()
    }

    /// Sum over the panels added since index `start`.
    pub fn partial_total(&self, start: usize) -> f64 {
        self.panels[start..].iter().map(|s| s.value).sum()
    }

    pub fn len(&self) -> usize {
        self.panels.len()
    }

    /// Refines every unfrozen panel until it converges or hits the refinement cap.
    ///
    /// `integrand(y, abs_tol)` returns `F(y)`; `abs_tol` is the absolute
    /// accuracy that node needs (infinite during the pilot pass).
    pub fn run(&mut self, integrand: &mut dyn FnMut(f64, f64) -> f64) -> Result<Outcome> {
        let mut estimate = self.total();
        if self.panels.iter().any(|s| s.level.is_none()) {
            // A cheap pilot pass for the new panels fixes the error budget.
            for i in 0..self.panels.len() {
                if self.panels[i].level.is_none() {
                    estimate += self.integrate_panel(i, self.initial_nodes, f64::INFINITY, integrand);
                }
            }
        }
        let panel_count = self.panels.len() as f64;
        loop {
            let mut active = false;
            for i in 0..self.panels.len() {
                let state = self.panels[i];
                if state.frozen {
                    continue;
                }
                let level = state.level.map_or(0, |l| l + 1);
                if level > self.max_refinements {
                    continue;
                }
                active = true;
                let n = self.initial_nodes << level;
                let budget = 0.1 * self.rel_tol * estimate.abs() / (n as f64 * panel_count);
                let value = self.integrate_panel(i, n, budget, integrand);
                let state = &mut self.panels[i];
                if state.level.is_some() {
                    state.change = (value - state.value).abs();
                    state.frozen = state.change <= self.rel_tol * estimate.abs() / panel_count;
                }
                state.value = value;
                state.level = Some(level);
            }
            estimate = self.total();
            if !active {
                break;
            }
        }
        Ok(self.outcome())
    }

    fn outcome(&self) -> Outcome {
        let value = self.total();
        let change: f64 = self.panels.iter().map(|s| s.change).sum();
        let previous = self
            .panels
            .iter()
            .map(|s| if s.frozen { s.value } else { s.value - s.change })
            .sum();
        Outcome {
            value,
            previous,
            rel_change: if value == 0.0 { change } else { change / value.abs() },
            converged: self.panels.iter().all(|s| s.frozen),
            max_level: self.panels.iter().filter_map(|s| s.level).max().unwrap_or(0),
            evaluations: self.evaluations,
        }
    }

    fn integrate_panel(
        &mut self,
        index: usize,
        n: usize,
        budget: f64,
        integrand: &mut dyn FnMut(f64, f64) -> f64,
    ) -> f64 {
        let panel = self.panels[index].panel;
        let rule = GaussJacobi::cached(n, panel.right_exp, panel.left_exp)
            .expect("panel exponents are validated by the caller");
        let half = 0.5 * (panel.hi - panel.lo);
        let scale = half.powf(panel.right_exp + panel.left_exp + 1.0);
        let mut sum = 0.0;
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            let y = if x <= 0.0 { panel.lo + half * (1.0 + x) } else { panel.hi - half * (1.0 - x) };
            let coefficient = scale * w * (self.density)(y, &panel);
            if coefficient == 0.0 {
                continue;
            }
            let tol = if budget.is_finite() { budget / coefficient } else { f64::INFINITY };
            sum += coefficient * integrand(y, tol);
            self.evaluations += 1;
        }
        sum
    }
}

/// Turns an unconverged outcome into an error when the last change is large.
pub(crate) fn check_divergence(outcome: &Outcome, rel_tol: f64) -> Result<()> {
    if !outcome.converged && !(outcome.rel_change <= rel_tol.sqrt()) {
        return Err(Error::Divergence { previous: outcome.previous, last: outcome.value });
    }
    if !outcome.value.is_finite() {
        return Err(Error::Divergence { previous: outcome.previous, last: outcome.value });
    }
    Ok(())
}
