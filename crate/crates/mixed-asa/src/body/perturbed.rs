//! Spatial bodies of the form h(u) = 1 + eps * p(u) on the 2-sphere,
//! where p is an even polynomial of total degree at most 4.
//!
//! Even monomials make the body origin-symmetric. Derivative information
//! (curvature, boundary points) is obtained by finite differences on the
//! homogeneous extension, with Richardson extrapolation; see `fd`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Monomial exponents of the even basis: six quadratics followed by
/// fifteen quartics, in this fixed documented order.
pub const EVEN_BASIS: [(u8, u8, u8); 21] = [
    (2, 0, 0),
    (0, 2, 0),
    (0, 0, 2),
    (1, 1, 0),
    (1, 0, 1),
    (0, 1, 1),
    (4, 0, 0),
    (0, 4, 0),
    (0, 0, 4),
    (3, 1, 0),
    (3, 0, 1),
    (1, 3, 0),
    (0, 3, 1),
    (1, 0, 3),
    (0, 1, 3),
    (2, 2, 0),
    (2, 0, 2),
    (0, 2, 2),
    (2, 1, 1),
    (1, 2, 1),
    (1, 1, 2),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedBall {
    /// Perturbation amplitude; |eps * p| must stay well below 1.
    pub eps: f64,
    /// Coefficients against [`EVEN_BASIS`]; shorter lists are zero-padded.
    pub poly: Vec<f64>,
}

impl PerturbedBall {
    pub fn new(eps: f64, poly: Vec<f64>) -> Result<Self> {
        if !eps.is_finite() {
            return Err(Error::Validation("non-finite perturbation amplitude".into()));
        }
        if poly.len() > EVEN_BASIS.len() {
            return Err(Error::Validation(format!(
                "polynomial has {} coefficients, basis has {}",
                poly.len(),
                EVEN_BASIS.len()
            )));
        }
        if poly.iter().any(|c| !c.is_finite()) {
            return Err(Error::Validation("non-finite polynomial coefficient".into()));
        }
        Ok(PerturbedBall { eps, poly })
    }

    pub fn poly_value(&self, v: &[f64; 3]) -> f64 {
        let mut p = 0.0;
        for (c, (a, b, d)) in self.poly.iter().zip(EVEN_BASIS.iter()) {
            p += c * v[0].powi(*a as i32) * v[1].powi(*b as i32) * v[2].powi(*d as i32);
        }
        p
    }

    pub fn support(&self, v: &[f64; 3]) -> f64 {
        1.0 + self.eps * self.poly_value(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_in_sign() {
        let body = PerturbedBall::new(
            0.2,
            vec![0.3, -0.1, 0.05, 0.2, 0.0, 0.0, 0.1, 0.0, 0.0, 0.4],
        )
        .unwrap();
        let v = [0.48, -0.6, 0.64];
        let m = [-0.48, 0.6, -0.64];
        assert!((body.support(&v) - body.support(&m)).abs() < 1e-15);
    }

    #[test]
    fn basis_has_all_even_monomials() {
        for (a, b, c) in EVEN_BASIS {
            assert_eq!((a + b + c) % 2, 0);
            assert!(a + b + c == 2 || a + b + c == 4);
        }
        assert_eq!(EVEN_BASIS.len(), 21);
    }
}
