//! Central finite differences on the 1-homogeneous extension
//! H(x) = |x| h(x/|x|) of a support function.
//!
//! Gradients and Hessians of H recover boundary points and curvature for
//! representations without analytic derivatives. Each stencil is
//! Richardson-extrapolated from two step sizes, which removes the leading
//! quadratic truncation term.

use crate::geom::{norm3, Mat3};

/// Default base step for Hessian stencils.
pub(crate) const HESSIAN_STEP: f64 = 1e-4;
/// Default base step for gradient stencils.
pub(crate) const GRADIENT_STEP: f64 = 1e-5;

/// Evaluates the homogeneous extension at an arbitrary nonzero point.
#[inline]
pub(crate) fn extension<F: Fn(&[f64; 3]) -> f64>(h: &F, x: &[f64; 3]) -> f64 {
    let r = norm3(x);
    let unit = [x[0] / r, x[1] / r, x[2] / r];
    r * h(&unit)
}

/// Gradient of H at a unit direction, Richardson-extrapolated.
pub(crate) fn gradient<F: Fn(&[f64; 3]) -> f64>(h: &F, u: &[f64; 3], n: usize) -> [f64; 3] {
    let g1 = gradient_step(h, u, n, GRADIENT_STEP);
    let g2 = gradient_step(h, u, n, 2.0 * GRADIENT_STEP);
    let mut g = [0.0; 3];
    for i in 0..3 {
        g[i] = (4.0 * g1[i] - g2[i]) / 3.0;
    }
    g
}

fn gradient_step<F: Fn(&[f64; 3]) -> f64>(h: &F, u: &[f64; 3], n: usize, s: f64) -> [f64; 3] {
    let mut g = [0.0; 3];
    for i in 0..n {
        let mut p = *u;
        let mut m = *u;
        p[i] += s;
        m[i] -= s;
        g[i] = (extension(h, &p) - extension(h, &m)) / (2.0 * s);
    }
    g
}

/// Hessian of H at a unit direction, Richardson-extrapolated from steps
/// `s` and `2s`.
pub(crate) fn hessian<F: Fn(&[f64; 3]) -> f64>(h: &F, u: &[f64; 3], n: usize, s: f64) -> Mat3 {
    let h1 = hessian_step(h, u, n, s);
    let h2 = hessian_step(h, u, n, 2.0 * s);
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (4.0 * h1[i][j] - h2[i][j]) / 3.0;
        }
    }
    out
}

fn hessian_step<F: Fn(&[f64; 3]) -> f64>(h: &F, u: &[f64; 3], n: usize, s: f64) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    let center = extension(h, u);
    for i in 0..n {
        let mut p = *u;
        let mut q = *u;
        p[i] += s;
        q[i] -= s;
        m[i][i] = (extension(h, &p) - 2.0 * center + extension(h, &q)) / (s * s);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut pp = *u;
            let mut pm = *u;
            let mut mp = *u;
            let mut mm = *u;
            pp[i] += s;
            pp[j] += s;
            pm[i] += s;
            pm[j] -= s;
            mp[i] -= s;
            mp[j] += s;
            mm[i] -= s;
            mm[j] -= s;
            let v = (extension(h, &pp) - extension(h, &pm) - extension(h, &mp)
                + extension(h, &mm))
                / (4.0 * s * s);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}
