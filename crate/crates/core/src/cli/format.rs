//! Value parsers for command-line arguments and number formatting for output.

use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Digits after the decimal point in plain and CSV output.
pub const DEFAULT_DIGITS: usize = 10;

/// Formats a float with `digits` decimals, trimming trailing zeros.
///
/// Magnitudes below `1e-4` switch to scientific notation with `digits`
/// significant digits so small gaps stay visible.
pub fn format_number(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x != 0.0 && x.abs() < 1e-4 {
        let text = format!("{:.*e}", digits.saturating_sub(1), x);
        let (mantissa, exponent) = text.split_once('e').expect("scientific format has an exponent");
        return format!("{}e{exponent}", trim_zeros(mantissa));
    }
    let text = trim_zeros(&format!("{x:.digits$}"));
    if text == "-0" { "0".to_owned() } else { text }
}

fn trim_zeros(text: &str) -> String {
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        text.to_owned()
    }
}

pub fn format_complex(z: Complex64, digits: usize) -> String {
    format!("{},{}", format_number(z.re, digits), format_number(z.im, digits))
}

/// Parses a complex number written as `re,im`.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| format!("expected a complex number as 're,im', got '{text}'"))?;
    let part = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("'{s}' is not a finite number in '{text}'"))
    };
    Ok(Complex64::new(part(re)?, part(im)?))
}

/// A point `re,im` of the open unit disk.
pub fn parse_disk_point(text: &str) -> std::result::Result<Complex64, String> {
    let z = parse_complex(text)?;
    if z.norm() < 1.0 {
        Ok(z)
    } else {
        Err(format!("point {text} must lie in the open unit disk (modulus {})", z.norm()))
    }
}

pub fn parse_exponent(text: &str) -> std::result::Result<f64, String> {
    match text.parse::<f64>() {
        Ok(p) if p.is_finite() && p > 0.0 => Ok(p),
        _ => Err(format!("exponent p must be a finite positive number, got '{text}'")),
    }
}

pub fn parse_alpha(text: &str) -> std::result::Result<f64, String> {
    match text.parse::<f64>() {
        Ok(a) if a.is_finite() && a > -1.0 => Ok(a),
        _ => Err(format!("alpha must be a finite number greater than -1, got '{text}'")),
    }
}

pub fn parse_multiplicity(text: &str) -> std::result::Result<u32, String> {
    match text.parse::<u32>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("N must be an integer of at least 1, got '{text}'")),
    }
}

/// An inclusive arithmetic progression written `start:step:stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl Grid {
    /// Grid points `start + k·step` up to `stop`, allowing for rounding in the count.
    pub fn values(&self) -> Vec<f64> {
        if self.stop < self.start {
            return Vec::new();
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, step, stop] = parts.as_slice() else {
            return Err(format!("expected a grid as 'start:step:stop', got '{text}'"));
        };
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("'{s}' is not a finite number in grid '{text}'"))
        };
        let grid = Grid { start: number(start)?, step: number(step)?, stop: number(stop)? };
        if !(grid.step > 0.0) {
            return Err(format!("grid step must be positive in '{text}'"));
        }
        Ok(grid)
    }
}

/// Reads polynomial coefficients in ascending powers, one `re,im` per line.
pub fn load_coefficients(path: &Path) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut coeffs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let c = parse_complex(line).map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        coeffs.push(c);
    }
    if coeffs.is_empty() {
        return Err(Error::Parse(format!("{}: no coefficients found", path.display())));
    }
    Ok(coeffs)
}

/// Writes coefficients in the format read by [`load_coefficients`], at full precision.
pub fn coefficients_to_string(coeffs: &[Complex64]) -> String {
    let mut out = String::from("# ascending powers, re,im\n");
    for c in coeffs {
        out.push_str(&format!("{},{}\n", exact(c.re), exact(c.im)));
    }
    out
}

/// Shortest text that parses back to exactly `x`.
fn exact(x: f64) -> String {
    if x != 0.0 && !(1e-4..1e16).contains(&x.abs()) { format!("{x:e}") } else { format!("{x}") }
}
