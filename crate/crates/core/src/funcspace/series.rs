//! Truncated Taylor series ("jets") in `h = z - z0`.
//!
//! A jet of order `K` holds `K + 1` coefficients `c_k = f^(k)(z0) / k!`.

use num_complex::Complex64;

pub(crate) type Jet = Vec<Complex64>;

pub(crate) fn constant(value: Complex64, order: usize) -> Jet {
    let mut jet = vec![Complex64::new(0.0, 0.0); order + 1];
    jet[0] = value;
    jet
}

pub(crate) fn mul(lhs: &[Complex64], rhs: &[Complex64]) -> Jet {
    let order = lhs.len().min(rhs.len()) - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
    for (i, &l) in lhs.iter().enumerate().take(order + 1) {
        if l == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &r) in rhs.iter().enumerate().take(order + 1 - i) {
            out[i + j] += l * r;
        }
    }
    out
}

pub(crate) fn scale(jet: &mut [Complex64], factor: Complex64) {
    for c in jet {
        *c *= factor;
    }
}

/// Exponent of a linear factor `(u + v h)^e`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Exponent {
    Integer(i32),
    Real(f64),
}

/// Principal-branch power `u^e`.
pub(crate) fn principal_pow(u: Complex64, e: Exponent) -> Complex64 {
    match e {
        Exponent::Integer(n) => u.powi(n),
        Exponent::Real(x) => {
            if x == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                (u.ln() * x).exp()
            }
        }
    }
}

/// Jet of `(u + v h)^e`; for non-integer or negative exponents `u` must be non-zero.
pub(crate) fn linear_power(u: Complex64, v: Complex64, e: Exponent, order: usize) -> Jet {
    let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
    match e {
        Exponent::Integer(n) if n >= 0 => {
            let n = n as usize;
            let mut binom = 1.0;
            for k in 0..=order.min(n) {
                out[k] = u.powi((n - k) as i32) * v.powi(k as i32) * binom;
                binom *= (n - k) as f64 / (k + 1) as f64;
            }
        }
        _ => {
            let e_real = match e {
                Exponent::Integer(n) => f64::from(n),
                Exponent::Real(x) => x,
            };
            let lead = principal_pow(u, e);
            let ratio = v / u;
            let mut term = lead;
            for (k, slot) in out.iter_mut().enumerate() {
                *slot = term;
                term *= ratio * ((e_real - k as f64) / (k + 1) as f64);
            }
        }
    }
    out
}

/// Jet of `outer(inner(h))` where `outer` is given by its jet about `inner[0]`.
pub(crate) fn compose(outer: &[Complex64], inner: &[Complex64]) -> Jet {
    let order = inner.len() - 1;
    let mut delta = inner.to_vec();
    delta[0] = Complex64::new(0.0, 0.0);
    let mut acc = constant(outer[order.min(outer.len() - 1)], order);
    for k in (0..order.min(outer.len() - 1)).rev() {
        acc = mul(&acc, &delta);
        acc[0] += outer[k];
    }
    acc
}

/// `k!` as a float.
pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}
