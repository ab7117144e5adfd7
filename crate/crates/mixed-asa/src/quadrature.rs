//! Deterministic quadrature on the unit circle and the unit 2-sphere.
//!
//! The planar rule is the uniform (trapezoid) rule, which is spectrally
//! accurate for smooth periodic integrands and exact for trigonometric
//! polynomials of degree below the node count. The spatial rule is a
//! product of Gauss-Legendre in the polar cosine and a uniform azimuth
//! grid with twice as many nodes.
//!
//! Sums are always accumulated in node order with compensated (Kahan)
//! summation, so a result depends only on the rule and the integrand,
//! never on evaluation scheduling.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::Dir;

/// Quadrature nodes and weights on S^{n-1}, n in {2, 3}.
///
/// Invariants checked at construction: every node is unit to 1e-12, all
/// weights are positive, and the weights sum to the total spherical
/// measure (2*pi for the circle, 4*pi for the sphere) to 1e-10.
#[derive(Debug, Clone)]
pub struct SphereRule {
    dim: usize,
    resolution: usize,
    nodes: Vec<Dir>,
    weights: Vec<f64>,
}

/// Default resolution of the planar rule.
pub const DEFAULT_RESOLUTION_2D: usize = 512;
/// Default polar resolution of the spatial rule (azimuth gets twice this).
pub const DEFAULT_RESOLUTION_3D: usize = 96;

impl SphereRule {
    /// Builds the rule for dimension `n` with resolution `N >= 8`.
    ///
    /// For n = 2 this places `N` equally spaced angles, each of weight
    /// 2*pi/N. For n = 3 it uses `N` Gauss-Legendre nodes in cos(theta)
    /// against `2N` uniform azimuth angles.
    pub fn build(n: usize, resolution: usize) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        if resolution < 8 {
            return Err(Error::Validation(format!(
                "rule resolution {resolution} below minimum 8"
            )));
        }
        let (nodes, weights) = match n {
            2 => {
                let w = 2.0 * PI / resolution as f64;
                let mut nodes = Vec::with_capacity(resolution);
                for j in 0..resolution {
                    nodes.push(Dir::from_angle(2.0 * PI * j as f64 / resolution as f64));
                }
                (nodes, vec![w; resolution])
            }
            _ => {
                let (gl_nodes, gl_weights) = gauss_legendre(resolution);
                let azimuth = 2 * resolution;
                let wphi = 2.0 * PI / azimuth as f64;
                let mut nodes = Vec::with_capacity(resolution * azimuth);
                let mut weights = Vec::with_capacity(resolution * azimuth);
                for (t, wt) in gl_nodes.iter().zip(&gl_weights) {
                    let st = (1.0 - t * t).max(0.0).sqrt();
                    for j in 0..azimuth {
                        let phi = 2.0 * PI * j as f64 / azimuth as f64;
                        nodes.push(Dir::from_raw(3, [st * phi.cos(), st * phi.sin(), *t]));
                        weights.push(wt * wphi);
                    }
                }
                (nodes, weights)
            }
        };
        let rule = SphereRule { dim: n, resolution, nodes, weights };
        rule.check_invariants()?;
        Ok(rule)
    }

    /// Default rule for the given dimension.
    pub fn default_for(n: usize) -> Result<Self> {
        match n {
            2 => Self::build(2, DEFAULT_RESOLUTION_2D),
            3 => Self::build(3, DEFAULT_RESOLUTION_3D),
            _ => Err(Error::UnsupportedDimension(n)),
        }
    }

    fn check_invariants(&self) -> Result<()> {
        for node in &self.nodes {
            let norm: f64 = node.coords().iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::Validation(format!("node off the sphere: norm {norm}")));
            }
        }
        if self.weights.iter().any(|w| *w <= 0.0) {
            return Err(Error::Validation("non-positive quadrature weight".into()));
        }
        let total: f64 = kahan_sum(self.weights.iter().copied());
        let expect = self.total_measure();
        if (total - expect).abs() > 1e-10 {
            return Err(Error::Validation(format!(
                "weights sum to {total}, expected {expect}"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Dir] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total measure of S^{n-1}: 2*pi (n=2) or 4*pi (n=3).
    pub fn total_measure(&self) -> f64 {
        match self.dim {
            2 => 2.0 * PI,
            _ => 4.0 * PI,
        }
    }

    /// Relative truncation level expected for smooth integrands; used by
    /// robustness tests rather than as a hard guarantee.
    pub fn truncation_tolerance(&self) -> f64 {
        match self.dim {
            2 => 1e-12,
            _ => 1e-10,
        }
    }

    /// Integrates `g` over the sphere: sum of w_i * g(u_i) in fixed node
    /// order with compensated summation.
    ///
    /// Fails with the offending node if `g` returns a non-finite value.
    pub fn integrate<G>(&self, mut g: G) -> Result<f64>
    where
        G: FnMut(&Dir) -> f64,
    {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (index, (node, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let value = g(node);
            if !value.is_finite() {
                return Err(Error::NonFiniteIntegrand {
                    index,
                    dir: node.coords().to_vec(),
                });
            }
            let term = w * value;
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        Ok(sum)
    }

    /// Fallible-integrand variant of [`integrate`](Self::integrate).
    pub fn try_integrate<G>(&self, mut g: G) -> Result<f64>
    where
        G: FnMut(&Dir) -> Result<f64>,
    {
        let mut cached: Result<f64> = Ok(0.0);
        let out = self.integrate(|u| match g(u) {
            Ok(v) => v,
            Err(e) => {
                cached = Err(e);
                f64::NAN
            }
        });
        match cached {
            Err(e) => Err(e),
            Ok(_) => out,
        }
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence with the usual cosine initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess for the i-th root.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_with_derivative(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_rule_four_nodes() {
        let rule = SphereRule::build(2, 8).unwrap();
        assert_eq!(rule.len(), 8);
        assert!((rule.weights()[0] - PI / 4.0).abs() < 1e-15);
        // First node at angle 0, third at pi/2.
        assert!((rule.nodes()[2].coords()[0]).abs() < 1e-15);
        assert!((rule.nodes()[2].coords()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn total_measures() {
        let c = SphereRule::build(2, 256).unwrap();
        assert!((kahan_sum(c.weights().iter().copied()) - 2.0 * PI).abs() < 1e-12);
        let s = SphereRule::build(3, 64).unwrap();
        assert!((kahan_sum(s.weights().iter().copied()) - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn unsupported_dimension_is_an_error() {
        assert!(matches!(
            SphereRule::build(4, 64),
            Err(Error::UnsupportedDimension(4))
        ));
        assert!(matches!(
            SphereRule::build(1, 64),
            Err(Error::UnsupportedDimension(1))
        ));
    }

    #[test]
    fn constant_on_circle() {
        let rule = SphereRule::build(2, 64).unwrap();
        let v = rule.integrate(|_| 1.0).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn first_coordinate_squared_on_sphere() {
        let rule = SphereRule::build(3, 32).unwrap();
        let v = rule.integrate(|u| u.coords()[0].powi(2)).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn odd_product_vanishes_on_circle() {
        let rule = SphereRule::build(2, 128).unwrap();
        let v = rule
            .integrate(|u| u.coords()[0] * u.coords()[1])
            .unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn trigonometric_exactness() {
        let n = 64;
        let rule = SphereRule::build(2, n).unwrap();
        for k in 1..n {
            let v = rule
                .integrate(|u| (k as f64 * u.angle()).cos())
                .unwrap();
            assert!(v.abs() < 1e-12, "cos({k}t) integrated to {v}");
        }
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let rule = SphereRule::build(2, 16).unwrap();
        let err = rule
            .integrate(|u| if u.coords()[1] > 0.9 { f64::NAN } else { 1.0 })
            .unwrap_err();
        match err {
            Error::NonFiniteIntegrand { index, .. } => assert!(index > 0),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn refinement_differences_shrink() {
        // Smooth integrands with geometric (not factorial) spectral decay,
        // so the differences stay above the floating-point floor.
        let g2 = |u: &Dir| 1.0 / (1.2 - u.coords()[0]);
        let mut last = f64::INFINITY;
        for n in [8usize, 16, 32] {
            let a = SphereRule::build(2, n).unwrap().integrate(g2).unwrap();
            let b = SphereRule::build(2, 2 * n).unwrap().integrate(g2).unwrap();
            let diff = (a - b).abs();
            assert!(diff < last, "difference {diff} did not shrink at N={n}");
            last = diff;
        }
        let g3 = |u: &Dir| 1.0 / (1.3 - u.coords()[2]);
        let mut last = f64::INFINITY;
        for n in [8usize, 12, 16] {
            let a = SphereRule::build(3, n).unwrap().integrate(g3).unwrap();
            let b = SphereRule::build(3, 2 * n).unwrap().integrate(g3).unwrap();
            let diff = (a - b).abs();
            assert!(diff < last, "difference {diff} did not shrink at N={n}");
            last = diff;
        }
    }

    #[test]
    fn rotation_robustness() {
        let rule = SphereRule::build(2, 256).unwrap();
        let g = |u: &Dir| (u.coords()[0].sin() + u.coords()[1].cos()).exp();
        let base = rule.integrate(g).unwrap();
        let alpha: f64 = 0.7321;
        let rotated = rule
            .integrate(|u| {
                let (c, s) = (alpha.cos(), alpha.sin());
                let x = c * u.coords()[0] - s * u.coords()[1];
                let y = s * u.coords()[0] + c * u.coords()[1];
                (x.sin() + y.cos()).exp()
            })
            .unwrap();
        assert!((base - rotated).abs() / base.abs() < rule.truncation_tolerance());
    }

    #[test]
    fn gauss_legendre_degree() {
        // n-node rule is exact for polynomials of degree 2n-1.
        let (x, w) = gauss_legendre(5);
        let integral: f64 = x
            .iter()
            .zip(&w)
            .map(|(x, w)| w * (x.powi(9) + 2.0 * x.powi(8)))
            .sum();
        // int_{-1}^{1} x^9 = 0, int 2x^8 = 4/9.
        assert!((integral - 4.0 / 9.0).abs() < 1e-14);
    }
}
