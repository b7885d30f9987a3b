use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{domain, Error, Result};

/// A positive radial weight `ω` on `[0, 1)`.
#[derive(Clone)]
pub enum RadialWeight {
    /// `ω(r) = (α + 1)(1 - r²)^α`, normalized so that `∫₀¹ 2r ω(r) dr = 1`.
    Standard { alpha: f64 },
    Custom(CustomWeight),
}

/// A user-supplied weight, either a callable or an interpolated table.
#[derive(Clone)]
pub struct CustomWeight {
    label: String,
    omega: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl CustomWeight {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.omega)(r)
    }
}

impl fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Standard { alpha } => f.debug_struct("Standard").field("alpha", alpha).finish(),
            Self::Custom(w) => f.debug_tuple("Custom").field(&w.label).finish(),
        }
    }
}

/// Grid used for the positivity check of custom weights.
const POSITIVITY_SAMPLES: usize = 1000;

impl RadialWeight {
    pub fn standard(alpha: f64) -> Result<Self> {
        if !(alpha > -1.0 && alpha.is_finite()) {
            return domain(format!("weight exponent alpha must exceed -1, got {alpha}"));
        }
        Ok(Self::Standard { alpha })
    }

    /// Wraps a callable weight after checking positivity on a grid and
    /// integrability of `2r ω(r)` numerically.
    pub fn custom(label: impl Into<String>, omega: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let weight = CustomWeight { label: label.into(), omega: Arc::new(omega) };
        for k in 0..POSITIVITY_SAMPLES {
            let r = k as f64 / POSITIVITY_SAMPLES as f64;
            let value = weight.eval(r);
            if !(value > 0.0 && value.is_finite()) {
                return domain(format!("weight '{}' is not positive at r = {r}: {value}", weight.label));
            }
        }
        let weight = Self::Custom(weight);
        match super::weighted_moment(&weight, 0.0, &super::QuadratureSpec::custom()) {
            Ok(mass) if mass.is_finite() => Ok(weight),
            Ok(mass) => domain(format!("weight has infinite mass ({mass})")),
            Err(Error::Divergence { previous, last }) => domain(format!(
                "weight does not appear integrable: mass estimates {previous} then {last}"
            )),
            Err(err) => Err(err),
        }
    }

    /// Piecewise-linear weight through `(r, ω(r))` samples.
    ///
    /// Outside the sampled range the nearest sample value is held constant.
    pub fn from_table(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return domain("weight table is empty");
        }
        for (i, &(r, w)) in samples.iter().enumerate() {
            if !(0.0..1.0).contains(&r) {
                return domain(format!("weight table row {}: r = {r} lies outside [0, 1)", i + 1));
            }
            if !(w > 0.0 && w.is_finite()) {
                return domain(format!("weight table row {}: omega = {w} is not positive", i + 1));
            }
            if i > 0 && r <= samples[i - 1].0 {
                return domain(format!("weight table row {}: radii must be strictly increasing", i + 1));
            }
        }
        let label = format!("table with {} samples", samples.len());
        Self::custom(label, move |r| interpolate(&samples, r))
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Self::Standard { alpha } => (alpha + 1.0) * (1.0 - r * r).powf(*alpha),
            Self::Custom(w) => w.eval(r),
        }
    }
}

fn interpolate(samples: &[(f64, f64)], r: f64) -> f64 {
    let idx = samples.partition_point(|&(x, _)| x <= r);
    if idx == 0 {
        return samples[0].1;
    }
    if idx == samples.len() {
        return samples[idx - 1].1;
    }
    let (x0, y0) = samples[idx - 1];
    let (x1, y1) = samples[idx];
    y0 + (y1 - y0) * (r - x0) / (x1 - x0)
}

/// Reads a weight table with one `r,omega` pair per line; `#` starts a comment.
pub fn load_weight_table(path: &Path) -> Result<RadialWeight> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut samples = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse = |field: Option<&str>| -> Result<f64> {
            field
                .map(str::trim)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::Parse(format!("{}:{}: expected 'r,omega'", path.display(), lineno + 1)))
        };
        let mut fields = line.split(',');
        let r = parse(fields.next())?;
        let w = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(Error::Parse(format!("{}:{}: expected two fields", path.display(), lineno + 1)));
        }
        samples.push((r, w));
    }
    RadialWeight::from_table(samples)
}
