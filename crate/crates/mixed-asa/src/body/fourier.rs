//! Planar bodies given by a truncated Fourier support function
//! h(theta) = c0 + sum_{k>=2} a_k cos(k theta) + b_k sin(k theta).
//!
//! Frequency 1 is excluded: those terms are pure translations, and keeping
//! them out leaves random bodies near-centered. Curvature comes from the
//! planar identity f = h'' + h, differentiated term by term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierBody {
    /// Constant term; must be positive.
    pub c0: f64,
    /// Cosine coefficients for k = 2, 3, ...
    pub cos: Vec<f64>,
    /// Sine coefficients for k = 2, 3, ...
    pub sin: Vec<f64>,
}

impl FourierBody {
    pub fn new(c0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::Validation(format!("constant term {c0} must be positive")));
        }
        if cos.len() != sin.len() {
            return Err(Error::Validation(format!(
                "coefficient lists differ in length: {} vs {}",
                cos.len(),
                sin.len()
            )));
        }
        if cos.iter().chain(&sin).any(|c| !c.is_finite()) {
            return Err(Error::Validation("non-finite Fourier coefficient".into()));
        }
        Ok(FourierBody { c0, cos, sin })
    }

    /// Highest harmonic present (0 when the body is a disc).
    pub fn top_harmonic(&self) -> usize {
        if self.cos.is_empty() {
            0
        } else {
            self.cos.len() + 1
        }
    }

    pub fn support(&self, theta: f64) -> f64 {
        let mut h = self.c0;
        for (i, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let k = (i + 2) as f64;
            let (s, c) = (k * theta).sin_cos();
            h += a * c + b * s;
        }
        h
    }

    pub fn support_derivative(&self, theta: f64) -> f64 {
        let mut d = 0.0;
        for (i, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let k = (i + 2) as f64;
            let (s, c) = (k * theta).sin_cos();
            d += k * (b * c - a * s);
        }
        d
    }

    /// Curvature function h'' + h, term-wise: harmonic k contributes with
    /// the factor 1 - k^2.
    pub fn curvature(&self, theta: f64) -> f64 {
        let mut f = self.c0;
        for (i, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let k = (i + 2) as f64;
            let (s, c) = (k * theta).sin_cos();
            f += (1.0 - k * k) * (a * c + b * s);
        }
        f
    }

    /// True when only even harmonics are present, i.e. the body is
    /// origin-symmetric.
    pub fn is_even(&self) -> bool {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .all(|(i, (a, b))| (i + 2) % 2 == 0 || (*a == 0.0 && *b == 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump() -> FourierBody {
        FourierBody::new(1.0, vec![0.1], vec![0.0]).unwrap()
    }

    #[test]
    fn support_and_curvature_at_zero() {
        let b = bump();
        assert!((b.support(0.0) - 1.1).abs() < 1e-15);
        // h'' + h = 1.1 - 0.4 = 0.7 at theta = 0.
        assert!((b.curvature(0.0) - 0.7).abs() < 1e-15);
        assert!(b.support_derivative(0.0).abs() < 1e-15);
    }

    #[test]
    fn evenness() {
        assert!(bump().is_even());
        let odd = FourierBody::new(1.0, vec![0.0, 0.05], vec![0.0, 0.0]).unwrap();
        assert!(!odd.is_even());
    }
}
