use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::funcspace::{check_in_disk, Polynomial};
use crate::quadrature::{weighted_moment, QuadratureSpec, RadialWeight};

/// Largest search-space dimension accepted by the oracle.
pub const MAX_ORACLE_DIMENSION: usize = 64;

/// Relative residual accepted for the top generalized eigenpair.
const RESIDUAL_TOL: f64 = 1e-12;

/// Exact maximum of `‖f/φ_a^N‖ / ‖f‖` in `A^2_α` over `f = (z-a)^N q` with
/// `deg f ≤ degree`.
///
/// Monomials are orthogonal for radial weights, so both squared norms are
/// Hermitian forms `q* T* D T q` with `D = diag(‖z^k‖²)` and `T` the
/// convolution by `(z-a)^N`, respectively `(-1)^N (1 - conj(a) z)^N`.
/// The answer is the square root of the top generalized eigenvalue.
pub fn eigen_oracle_p2(n: u32, alpha: f64, a: Complex64, degree: usize) -> Result<f64> {
    if n == 0 {
        return domain("zero multiplicity N must be at least 1");
    }
    check_in_disk(a, "a")?;
    let weight = RadialWeight::standard(alpha)?;
    let n_usize = n as usize;
    if degree < n_usize {
        return domain(format!("degree {degree} must be at least N = {n}"));
    }
    let dim = degree - n_usize + 1;
    if dim > MAX_ORACLE_DIMENSION {
        return domain(format!("search dimension {dim} exceeds {MAX_ORACLE_DIMENSION}"));
    }

    let spec = QuadratureSpec::standard();
    let moments = (0..=degree)
        .map(|k| weighted_moment(&weight, 2.0 * k as f64, &spec))
        .collect::<Result<Vec<f64>>>()?;
    let one = Complex64::new(1.0, 0.0);
    let vanishing = Polynomial::linear_power(-a, one, n);
    let sign = if n.is_multiple_of(2) { one } else { -one };
    let quotient = Polynomial::linear_power(one, -a.conj(), n).scaled(sign);

    let gram = |factor: &Polynomial| {
        let coeffs = factor.coeffs();
        let t = DMatrix::from_fn(degree + 1, dim, |row, col| {
            row.checked_sub(col).and_then(|j| coeffs.get(j).copied()).unwrap_or_default()
        });
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            degree + 1,
            moments.iter().map(|&m| Complex64::new(m, 0.0)),
        ));
        t.adjoint() * d * t
    };
    let lhs = gram(&quotient);
    let rhs = gram(&vanishing);

    let cholesky = rhs.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = cholesky.l();
    let x = l.solve_lower_triangular(&lhs).ok_or(Error::NotPositiveDefinite)?;
    let reduced = l.solve_lower_triangular(&x.adjoint()).ok_or(Error::NotPositiveDefinite)?;
    let reduced = (&reduced + reduced.adjoint()) * Complex64::new(0.5, 0.0);
    let eigen = reduced.symmetric_eigen();
    let (top, &lambda) = eigen
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("dimension is positive");

    let y = eigen.eigenvectors.column(top).into_owned();
    let v = l.adjoint().solve_upper_triangular(&y).ok_or(Error::NotPositiveDefinite)?;
    let residual = &lhs * &v - &rhs * &v * Complex64::new(lambda, 0.0);
    let scale = lhs.norm() * v.norm();
    let relative = residual.norm() / scale;
    if !(relative <= RESIDUAL_TOL) {
        return domain(format!("generalized eigenpair residual {relative:e} exceeds {RESIDUAL_TOL:e}"));
    }
    Ok(lambda.sqrt())
}
