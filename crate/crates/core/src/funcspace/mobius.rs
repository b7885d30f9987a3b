use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// The disk automorphism `φ_a(z) = (a - z) / (1 - conj(a) z)`.
///
/// `φ_a` is an involution exchanging `a` and `0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    a: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64) -> Result<Self> {
        check_in_disk(a, "a")?;
        Ok(Self { a })
    }

    pub fn center(&self) -> Complex64 {
        self.a
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a - z) / (Complex64::new(1.0, 0.0) - self.a.conj() * z)
    }

    /// `φ_a'(z) = (|a|² - 1) / (1 - conj(a) z)²`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let denom = Complex64::new(1.0, 0.0) - self.a.conj() * z;
        Complex64::new(self.a.norm_sqr() - 1.0, 0.0) / (denom * denom)
    }
}

/// `φ_a'(z)`, rejecting points outside the open disk.
pub fn mobius_derivative(map: &MobiusMap, z: Complex64) -> Result<Complex64> {
    check_in_disk(z, "z")?;
    Ok(map.derivative(z))
}

pub(crate) fn check_in_disk(z: Complex64, name: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() && z.norm_sqr() < 1.0 {
        Ok(())
    } else {
        domain(format!("{name} = {z} must lie in the open unit disk"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_disk_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
        let r = radius * rng.random::<f64>().sqrt();
        Complex64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU)
    }

    #[test]
    fn derivative_examples() {
        let origin = MobiusMap::new(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(origin.derivative(Complex64::new(0.3, -0.2)), Complex64::new(-1.0, 0.0));
        let half = MobiusMap::new(Complex64::new(0.5, 0.0)).unwrap();
        assert_relative_eq!(half.derivative(Complex64::new(0.0, 0.0)).re, -0.75);
        let d = mobius_derivative(&half, Complex64::new(0.5, 0.0)).unwrap();
        assert_relative_eq!(d.re, -4.0 / 3.0, max_relative = 1e-15);
        assert_eq!(d.im, 0.0);
        assert!(mobius_derivative(&half, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn rejects_boundary_center() {
        assert!(MobiusMap::new(Complex64::new(0.6, 0.8)).is_err());
        assert!(MobiusMap::new(Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn involution_and_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_disk_point(&mut rng, 0.99);
            let z = random_disk_point(&mut rng, 0.99);
            let map = MobiusMap::new(a).unwrap();
            assert!((map.apply(map.apply(z)) - z).norm() <= 1e-12);
            assert!(map.apply(a).norm() <= 1e-15);
            assert!((map.apply(Complex64::new(0.0, 0.0)) - a).norm() <= 1e-15);
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let map = MobiusMap::new(Complex64::new(0.3, 0.4)).unwrap();
        let z = Complex64::new(-0.2, 0.1);
        let h = 1e-6;
        let fd = (map.apply(z + h) - map.apply(z - h)) / (2.0 * h);
        assert!((fd - map.derivative(z)).norm() < 1e-8);
    }
}
