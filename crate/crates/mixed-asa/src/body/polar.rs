//! Numeric polar bodies.
//!
//! The support of the polar body in direction u is the spherical maximum
//!
//!   h_{K*}(u) = max { <u, v> / h_K(v) : v on the sphere, <u, v> > 0 },
//!
//! which is the radial-to-support bridge rho_{K*}(v) = 1/h_K(v). The
//! maximizer w is the direction of the boundary point of the polar body
//! with outer normal u, so the curvature of the polar follows from the
//! pointwise inversion
//!
//!   f_{K*}(u) = 1 / ( h_{K*}(u)^{n+1} * h_K(w)^{n+1} * f_K(w) ).
//!
//! The planar maximization is a coarse scan plus golden-section
//! refinement; the spatial one is a coarse scan plus a safeguarded Newton
//! iteration in tangent coordinates with finite-difference derivatives.
//! Solves are memoized per direction; memoization never alters values.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::geom::{add3, norm3, scale3, tangent_frame, Dir};

use super::SupportBody;

/// Captures the first inner-evaluation error raised inside an
/// optimization loop; the loop sees NaN and finishes, then the error is
/// surfaced.
struct ErrCapture {
    first: RefCell<Option<Error>>,
}

impl ErrCapture {
    fn new() -> Self {
        ErrCapture { first: RefCell::new(None) }
    }

    fn eval(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.first.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn check(self) -> Result<()> {
        match self.first.into_inner() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// One polar support solve: the value and the maximizing direction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PolarSolve {
    pub support: f64,
    pub maximizer: [f64; 3],
}

/// Per-body memo of solves keyed by the exact direction bits.
#[derive(Debug, Default)]
pub(crate) struct PolarCache {
    map: Mutex<HashMap<[u64; 3], PolarSolve>>,
}

impl PolarCache {
    pub(crate) fn solve(&self, inner: &SupportBody, u: &Dir) -> Result<PolarSolve> {
        if let Some(hit) = self.map.lock().unwrap().get(&u.key()) {
            return Ok(*hit);
        }
        let solved = match inner.dim() {
            2 => solve_planar(inner, u),
            _ => solve_spatial(inner, u),
        }?;
        self.map.lock().unwrap().insert(u.key(), solved);
        Ok(solved)
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const COARSE_2D: usize = 256;
const ANGLE_TOL: f64 = 1e-12;

fn solve_planar(inner: &SupportBody, u: &Dir) -> Result<PolarSolve> {
    let phi = u.angle();
    let capture = ErrCapture::new();
    let g = |theta: f64| {
        let d = Dir::from_angle(theta);
        u.dot(d.raw()) / capture.eval(inner.support_dir(&d))
    };
    // The maximizer lies strictly inside the open half-circle around u.
    let half = PI / 2.0;
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=COARSE_2D {
        let theta = phi - half + (2.0 * half) * i as f64 / COARSE_2D as f64;
        let v = g(theta);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let step = 2.0 * half / COARSE_2D as f64;
    let mut lo = phi - half + step * (best_i.saturating_sub(1)) as f64;
    let mut hi = phi - half + step * (best_i + 1).min(COARSE_2D) as f64;
    // Golden-section ascent on the bracket.
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    let mut iterations = 0usize;
    while hi - lo > ANGLE_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = g(x1);
        }
        iterations += 1;
        if iterations > 500 {
            return Err(Error::Convergence {
                dir: u.coords().to_vec(),
                detail: "golden-section bracket failed to shrink".into(),
            });
        }
    }
    let theta = 0.5 * (lo + hi);
    let w = Dir::from_angle(theta);
    let value = g(theta);
    capture.check()?;
    if !(value > 0.0) {
        return Err(Error::Convergence {
            dir: u.coords().to_vec(),
            detail: format!("polar support came out non-positive ({value})"),
        });
    }
    Ok(PolarSolve { support: value, maximizer: *w.raw() })
}

const COARSE_POLAR_3D: usize = 24;
const NEWTON_STEP: f64 = 1e-5;
const NEWTON_MAX: usize = 80;

fn solve_spatial(inner: &SupportBody, u: &Dir) -> Result<PolarSolve> {
    let capture = ErrCapture::new();
    let g = |v: &[f64; 3]| {
        let d = Dir::from_raw(3, *v);
        u.dot(v) / capture.eval(inner.support_dir(&d))
    };

    // Coarse scan over a product grid, restricted to the open hemisphere.
    let mut best_v = *u.raw();
    let mut best = g(&best_v);
    for i in 0..COARSE_POLAR_3D {
        let ct = -1.0 + 2.0 * (i as f64 + 0.5) / COARSE_POLAR_3D as f64;
        let st = (1.0 - ct * ct).sqrt();
        for j in 0..(2 * COARSE_POLAR_3D) {
            let phi = PI * j as f64 / COARSE_POLAR_3D as f64;
            let v = [st * phi.cos(), st * phi.sin(), ct];
            if u.dot(&v) <= 0.0 {
                continue;
            }
            let val = g(&v);
            if val > best {
                best = val;
                best_v = v;
            }
        }
    }

    // Safeguarded Newton ascent in tangent coordinates.
    let mut v = best_v;
    let s = NEWTON_STEP;
    let mut converged = false;
    for _ in 0..NEWTON_MAX {
        let (e1, e2) = tangent_frame(&v);
        let q = |t1: f64, t2: f64| {
            let raw = add3(&add3(&v, &scale3(&e1, t1)), &scale3(&e2, t2));
            let nrm = norm3(&raw);
            g(&[raw[0] / nrm, raw[1] / nrm, raw[2] / nrm])
        };
        let q0 = q(0.0, 0.0);
        let qp1 = q(s, 0.0);
        let qm1 = q(-s, 0.0);
        let qp2 = q(0.0, s);
        let qm2 = q(0.0, -s);
        let g1 = (qp1 - qm1) / (2.0 * s);
        let g2 = (qp2 - qm2) / (2.0 * s);
        let h11 = (qp1 - 2.0 * q0 + qm1) / (s * s);
        let h22 = (qp2 - 2.0 * q0 + qm2) / (s * s);
        let h12 = (q(s, s) - q(s, -s) - q(-s, s) + q(-s, -s)) / (4.0 * s * s);
        let det = h11 * h22 - h12 * h12;
        let grad_norm = (g1 * g1 + g2 * g2).sqrt();
        let (mut d1, mut d2);
        if det > 0.0 && h11 < 0.0 {
            // Negative-definite Hessian: plain Newton step.
            d1 = -(h22 * g1 - h12 * g2) / det;
            d2 = -(-h12 * g1 + h11 * g2) / det;
        } else {
            // Fall back to a short gradient step.
            d1 = g1 * 0.5;
            d2 = g2 * 0.5;
        }
        let step_norm = (d1 * d1 + d2 * d2).sqrt();
        if step_norm > 0.2 {
            d1 *= 0.2 / step_norm;
            d2 *= 0.2 / step_norm;
        }
        let raw = add3(&add3(&v, &scale3(&e1, d1)), &scale3(&e2, d2));
        let nrm = norm3(&raw);
        v = [raw[0] / nrm, raw[1] / nrm, raw[2] / nrm];
        if step_norm < 1e-11 && grad_norm < 1e-9 {
            converged = true;
            break;
        }
    }
    let value = g(&v);
    capture.check()?;
    if !converged {
        return Err(Error::Convergence {
            dir: u.coords().to_vec(),
            detail: format!("polar ascent did not converge in {NEWTON_MAX} steps"),
        });
    }
    if !(value > 0.0) || u.dot(&v) <= 0.0 {
        return Err(Error::Convergence {
            dir: u.coords().to_vec(),
            detail: "maximizer left the open hemisphere".into(),
        });
    }
    Ok(PolarSolve { support: value, maximizer: v })
}

/// Positivity margin of the polar body on a coarse grid, via the
/// pointwise inversion; used for construction-time validation.
pub(crate) fn polar_margin(inner: &SupportBody, cache: &PolarCache) -> Result<f64> {
    let n = inner.dim();
    let dirs: Vec<Dir> = match n {
        2 => (0..64).map(|i| Dir::from_angle(2.0 * PI * i as f64 / 64.0)).collect(),
        _ => {
            let mut out = Vec::new();
            for i in 0..12 {
                let ct = -1.0 + 2.0 * (i as f64 + 0.5) / 12.0;
                let st = (1.0 - ct * ct).sqrt();
                for j in 0..24 {
                    let phi = PI * j as f64 / 12.0;
                    out.push(Dir::from_raw(3, [st * phi.cos(), st * phi.sin(), ct]));
                }
            }
            out
        }
    };
    let mut min_f = f64::INFINITY;
    for u in &dirs {
        let solve = cache.solve(inner, u)?;
        let w = Dir::from_raw(n, solve.maximizer);
        let hk = inner.support_dir(&w)?;
        let fk = inner.curvature_raw(&w)?;
        if !(solve.support > 0.0) {
            return Err(Error::Validation(format!(
                "polar support non-positive at {:?}",
                u.coords()
            )));
        }
        let f = 1.0 / (solve.support.powi(n as i32 + 1) * hk.powi(n as i32 + 1) * fk);
        min_f = min_f.min(f);
    }
    Ok(min_f)
}

/// The planar maximization has a closed counterpart for discs and
/// ellipses; exercised in the parent module's tests.
#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::SupportBody;

    #[test]
    fn polar_support_of_disc_is_one() {
        let ball = SupportBody::ball(2).unwrap();
        let cache = PolarCache::default();
        let u = Dir::from_angle(0.37);
        let solve = cache.solve(&ball, &u).unwrap();
        assert!((solve.support - 1.0).abs() < 1e-12);
        let align = u.dot(&solve.maximizer);
        assert!((align - 1.0).abs() < 1e-10);
    }

    #[test]
    fn memoization_returns_identical_values() {
        let ball = SupportBody::ball(3).unwrap();
        let cache = PolarCache::default();
        let u = Dir::new(&[0.0, 0.6, 0.8]).unwrap();
        let a = cache.solve(&ball, &u).unwrap();
        let b = cache.solve(&ball, &u).unwrap();
        assert_eq!(a.support.to_bits(), b.support.to_bits());
    }
}
