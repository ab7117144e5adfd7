//! Smooth convex bodies represented through their support functions.
//!
//! A body here is C2+ — origin interior, C2 boundary, strictly positive
//! Gauss curvature — and everything is derived from the support function
//! h_K on the sphere: the curvature function f_K as the determinant of
//! the restricted Hessian of the homogeneous extension, boundary points
//! as its gradient, volume and centroid by spherical integration.
//!
//! Construction validates positivity of h and of the curvature operator
//! on a dense grid and caches the convexity margin (the smallest
//! curvature-operator eigenvalue seen).

mod fd;
mod fourier;
mod perturbed;
mod polar;

pub use fourier::FourierBody;
pub use perturbed::{PerturbedBall, EVEN_BASIS};

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    add3, dot3, mat_det, mat_identity, mat_inverse, mat_mul, mat_transpose, mat_vec, norm3,
    scale3, sym2_eigenvalues, tangent_frame, Dir, Mat3,
};
use crate::quadrature::SphereRule;
use polar::PolarCache;

/// Volume of the unit ball B^n_2.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => unreachable!("dimension checked at construction"),
    }
}

/// An invertible linear map with its determinant and inverse-transpose
/// computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    n: usize,
    m: Mat3,
    det: f64,
    inv: Mat3,
    inv_t: Mat3,
}

impl LinearMap {
    /// Builds the map from row-major entries; rejects singular input and
    /// checks T * T^{-1} = I to 1e-12.
    pub fn new(n: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Validation(format!("matrix is not {n}x{n}")));
        }
        let mut m = mat_identity();
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Validation("non-finite matrix entry".into()));
                }
                m[i][j] = *v;
            }
        }
        Self::from_mat(n, m)
    }

    fn from_mat(n: usize, m: Mat3) -> Result<Self> {
        let det = mat_det(&m, n);
        let scale = m
            .iter()
            .take(n)
            .flat_map(|r| r.iter().take(n))
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        if det.abs() <= 1e-12 * scale.powi(n as i32).max(1e-30) {
            return Err(Error::Validation(format!("matrix is singular (det {det:.3e})")));
        }
        let inv = mat_inverse(&m, n)
            .ok_or_else(|| Error::Validation("matrix is singular".into()))?;
        let id = mat_mul(&m, &inv);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                if (id[i][j] - want).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::Validation(
                        "inverse check failed beyond 1e-12".into(),
                    ));
                }
            }
        }
        Ok(LinearMap { n, m, det, inv, inv_t: mat_transpose(&inv) })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_mat(n, mat_identity())
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        if n != 2 && n != 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut m = mat_identity();
        for (i, d) in entries.iter().enumerate() {
            m[i][i] = *d;
        }
        Self::from_mat(n, m)
    }

    /// Uniform dilation by `lambda > 0`.
    pub fn dilation(n: usize, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Validation(format!("dilation factor {lambda} must be positive")));
        }
        Self::diagonal(&vec![lambda; n])
    }

    pub fn rotation_2d(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let mut m = mat_identity();
        m[0][0] = c;
        m[0][1] = -s;
        m[1][0] = s;
        m[1][1] = c;
        LinearMap::from_mat(2, m).expect("rotation is invertible")
    }

    /// Haar-ish random rotation (uniform quaternion for n = 3).
    pub fn random_rotation<R: Rng>(rng: &mut R, n: usize) -> Result<Self> {
        match n {
            2 => Ok(Self::rotation_2d(rng.gen_range(0.0..2.0 * PI))),
            3 => {
                let (u1, u2, u3): (f64, f64, f64) =
                    (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
                let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
                let (q0, q1) = (a * (2.0 * PI * u2).sin(), a * (2.0 * PI * u2).cos());
                let (q2, q3) = (b * (2.0 * PI * u3).sin(), b * (2.0 * PI * u3).cos());
                let m = [
                    [
                        1.0 - 2.0 * (q2 * q2 + q3 * q3),
                        2.0 * (q1 * q2 - q0 * q3),
                        2.0 * (q1 * q3 + q0 * q2),
                    ],
                    [
                        2.0 * (q1 * q2 + q0 * q3),
                        1.0 - 2.0 * (q1 * q1 + q3 * q3),
                        2.0 * (q2 * q3 - q0 * q1),
                    ],
                    [
                        2.0 * (q1 * q3 - q0 * q2),
                        2.0 * (q2 * q3 + q0 * q1),
                        1.0 - 2.0 * (q1 * q1 + q2 * q2),
                    ],
                ];
                Self::from_mat(3, m)
            }
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    /// Random map with determinant exactly +-1: R1 * diag * R2 with the
    /// diagonal normalized to unit product.
    pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Result<Self> {
        let r1 = Self::random_rotation(rng, n)?;
        let r2 = Self::random_rotation(rng, n)?;
        let diag = match n {
            2 => {
                let d = rng.gen_range(0.5..2.0);
                Self::diagonal(&[d, 1.0 / d])?
            }
            _ => {
                let d1 = rng.gen_range(0.6..1.7);
                let d2 = rng.gen_range(0.6..1.7);
                Self::diagonal(&[d1, d2, 1.0 / (d1 * d2)])?
            }
        };
        Ok(r1.compose(&diag).compose(&r2))
    }

    /// Random well-conditioned invertible map.
    pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Result<Self> {
        let r1 = Self::random_rotation(rng, n)?;
        let r2 = Self::random_rotation(rng, n)?;
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        Ok(r1.compose(&Self::diagonal(&d)?).compose(&r2))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.m[i][..self.n].to_vec()).collect()
    }

    /// self o other (apply `other` first).
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap::from_mat(self.n, mat_mul(&self.m, &other.m))
            .expect("product of invertible maps is invertible")
    }

    pub fn inverse(&self) -> LinearMap {
        LinearMap::from_mat(self.n, self.inv).expect("inverse is invertible")
    }

    pub fn transpose(&self) -> LinearMap {
        LinearMap::from_mat(self.n, mat_transpose(&self.m)).expect("transpose is invertible")
    }

    pub fn inverse_transpose(&self) -> LinearMap {
        LinearMap::from_mat(self.n, self.inv_t).expect("inverse transpose is invertible")
    }

    pub(crate) fn mat3(&self) -> &Mat3 {
        &self.m
    }

    pub(crate) fn apply3(&self, v: &[f64; 3]) -> [f64; 3] {
        mat_vec(&self.m, v)
    }

    pub(crate) fn apply_transpose3(&self, v: &[f64; 3]) -> [f64; 3] {
        mat_vec(&mat_transpose(&self.m), v)
    }

    pub(crate) fn apply_inv_transpose3(&self, v: &[f64; 3]) -> [f64; 3] {
        mat_vec(&self.inv_t, v)
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        let mut x = [0.0; 3];
        x[..self.n].copy_from_slice(v);
        Ok(self.apply3(&x)[..self.n].to_vec())
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Shape {
    Ball,
    Ellipsoid(LinearMap),
    Fourier(FourierBody),
    Perturbed(PerturbedBall),
    Mapped(LinearMap, Arc<SupportBody>),
    Translate(Arc<SupportBody>, [f64; 3]),
    Polar(Arc<SupportBody>, Arc<PolarCache>),
}

/// A validated C2+ convex body.
#[derive(Debug, Clone)]
pub struct SupportBody {
    dim: usize,
    shape: Shape,
    margin: f64,
}

const VALIDATION_GRID_2D: usize = 1024;
const VALIDATION_GRID_3D: (usize, usize) = (24, 48);

pub(crate) fn validation_dirs(n: usize) -> Vec<Dir> {
    match n {
        2 => (0..VALIDATION_GRID_2D)
            .map(|i| Dir::from_angle(2.0 * PI * i as f64 / VALIDATION_GRID_2D as f64))
            .collect(),
        _ => {
            let (np, na) = VALIDATION_GRID_3D;
            let mut out = Vec::with_capacity(np * na);
            for i in 0..np {
                let ct = -1.0 + 2.0 * (i as f64 + 0.5) / np as f64;
                let st = (1.0 - ct * ct).sqrt();
                for j in 0..na {
                    let phi = 2.0 * PI * j as f64 / na as f64;
                    out.push(Dir::from_raw(3, [st * phi.cos(), st * phi.sin(), ct]));
                }
            }
            out
        }
    }
}

impl SupportBody {
    /// The unit Euclidean ball.
    pub fn ball(n: usize) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(SupportBody { dim: n, shape: Shape::Ball, margin: 1.0 })
    }

    /// The ellipsoid A * B^n_2.
    pub fn ellipsoid(map: LinearMap) -> Result<Self> {
        let dim = map.dim();
        Self::validated(dim, Shape::Ellipsoid(map))
    }

    /// Planar body from a truncated Fourier support function.
    pub fn fourier(body: FourierBody) -> Result<Self> {
        Self::validated(2, Shape::Fourier(body))
    }

    pub fn fourier2d(c0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        Self::fourier(FourierBody::new(c0, cos, sin)?)
    }

    /// Spatial perturbed ball h = 1 + eps * p.
    pub fn perturbed_ball(eps: f64, poly: Vec<f64>) -> Result<Self> {
        Self::validated(3, Shape::Perturbed(PerturbedBall::new(eps, poly)?))
    }

    fn validated(dim: usize, shape: Shape) -> Result<Self> {
        let candidate = SupportBody { dim, shape, margin: f64::NAN };
        let margin = match &candidate.shape {
            Shape::Ball => 1.0,
            Shape::Polar(inner, cache) => {
                // Polar support is solved on a coarse grid; positivity of
                // both h and the inverted curvature certifies the body.
                polar::polar_margin(inner, cache)?
            }
            _ => {
                let mut min_h = f64::INFINITY;
                let mut min_eig = f64::INFINITY;
                for u in validation_dirs(dim) {
                    min_h = min_h.min(candidate.support_dir(&u)?);
                    min_eig = min_eig.min(candidate.min_curvature_eig(&u)?);
                }
                if !(min_h > 0.0) {
                    return Err(Error::Validation(format!(
                        "support function is not positive (min {min_h:.6e}); origin must be interior"
                    )));
                }
                min_eig
            }
        };
        if !(margin > 0.0) {
            return Err(Error::Validation(format!(
                "body is not C2+: curvature-operator margin {margin:.6e}"
            )));
        }
        Ok(SupportBody { margin, ..candidate })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cached convexity margin: the smallest curvature-operator eigenvalue
    /// observed on the validation grid.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    fn check_dir(&self, u: &[f64]) -> Result<Dir> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: u.len() });
        }
        Dir::new(u)
    }

    /// Support function h_K(u) for a unit direction.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        let d = self.check_dir(u)?;
        self.support_dir(&d)
    }

    pub(crate) fn support_dir(&self, u: &Dir) -> Result<f64> {
        Ok(match &self.shape {
            Shape::Ball => 1.0,
            Shape::Ellipsoid(a) => norm3(&a.apply_transpose3(u.raw())),
            Shape::Fourier(f) => f.support(u.angle()),
            Shape::Perturbed(p) => p.support(u.raw()),
            Shape::Mapped(t, k) => {
                let y = t.apply_transpose3(u.raw());
                let r = norm3(&y);
                r * k.support_dir(&Dir::from_raw(self.dim, scale3(&y, 1.0 / r)))?
            }
            Shape::Translate(k, c) => k.support_dir(u)? + dot3(c, u.raw()),
            Shape::Polar(inner, cache) => cache.solve(inner, u)?.support,
        })
    }

    /// Curvature function f_K(u) (reciprocal Gauss curvature at the
    /// boundary point with outer normal u). Errors when the computed
    /// value is not strictly positive.
    pub fn curvature_function(&self, u: &[f64]) -> Result<f64> {
        let d = self.check_dir(u)?;
        let f = self.curvature_raw(&d)?;
        if !(f > 0.0) {
            return Err(Error::NotSmooth { dir: u.to_vec(), value: f });
        }
        Ok(f)
    }

    pub(crate) fn curvature_raw(&self, u: &Dir) -> Result<f64> {
        let n = self.dim;
        Ok(match &self.shape {
            Shape::Ball => 1.0,
            Shape::Ellipsoid(a) => {
                let y = norm3(&a.apply_transpose3(u.raw()));
                a.det().powi(2) * y.powi(-(n as i32 + 1))
            }
            Shape::Fourier(f) => f.curvature(u.angle()),
            Shape::Perturbed(p) => {
                let h = |v: &[f64; 3]| p.support(v);
                let hess = fd::hessian(&h, u.raw(), 3, fd::HESSIAN_STEP);
                det_with_radial(&hess, u.raw())
            }
            Shape::Mapped(t, k) => {
                let y = t.apply_transpose3(u.raw());
                let r = norm3(&y);
                let inner_dir = Dir::from_raw(n, scale3(&y, 1.0 / r));
                t.det().powi(2) * r.powi(-(n as i32 + 1)) * k.curvature_raw(&inner_dir)?
            }
            Shape::Translate(k, _) => k.curvature_raw(u)?,
            Shape::Polar(inner, cache) => {
                let solve = cache.solve(inner, u)?;
                let w = Dir::from_raw(n, solve.maximizer);
                let hk = inner.support_dir(&w)?;
                let fk = inner.curvature_raw(&w)?;
                1.0 / (solve.support.powi(n as i32 + 1) * hk.powi(n as i32 + 1) * fk)
            }
        })
    }

    /// The boundary point with outer normal u (the inverse Gauss map),
    /// realized as the gradient of the homogeneous extension of h.
    pub fn boundary_point(&self, u: &[f64]) -> Result<Vec<f64>> {
        let d = self.check_dir(u)?;
        let x = self.boundary_dir(&d)?;
        Ok(x[..self.dim].to_vec())
    }

    pub(crate) fn boundary_dir(&self, u: &Dir) -> Result<[f64; 3]> {
        Ok(match &self.shape {
            Shape::Ball => *u.raw(),
            Shape::Ellipsoid(a) => {
                let y = a.apply_transpose3(u.raw());
                scale3(&a.apply3(&y), 1.0 / norm3(&y))
            }
            Shape::Fourier(f) => {
                let theta = u.angle();
                let (h, dh) = (f.support(theta), f.support_derivative(theta));
                let t = [-u.raw()[1], u.raw()[0], 0.0];
                add3(&scale3(u.raw(), h), &scale3(&t, dh))
            }
            Shape::Perturbed(p) => {
                let h = |v: &[f64; 3]| p.support(v);
                fd::gradient(&h, u.raw(), 3)
            }
            Shape::Mapped(t, k) => {
                let y = t.apply_transpose3(u.raw());
                let inner_dir = Dir::from_raw(self.dim, scale3(&y, 1.0 / norm3(&y)));
                t.apply3(&k.boundary_dir(&inner_dir)?)
            }
            Shape::Translate(k, c) => add3(&k.boundary_dir(u)?, c),
            Shape::Polar(inner, cache) => {
                let solve = cache.solve(inner, u)?;
                let w = Dir::from_raw(self.dim, solve.maximizer);
                scale3(&solve.maximizer, 1.0 / inner.support_dir(&w)?)
            }
        })
    }

    /// Hessian of the homogeneous extension, where a closed or recursive
    /// form exists; `None` for numeric polars.
    fn hess_extension(&self, u: &Dir) -> Result<Option<Mat3>> {
        Ok(match &self.shape {
            Shape::Ball => {
                let mut m = mat_identity();
                for i in 0..3 {
                    for j in 0..3 {
                        m[i][j] -= u.raw()[i] * u.raw()[j];
                    }
                }
                Some(m)
            }
            Shape::Ellipsoid(a) => {
                let y = a.apply_transpose3(u.raw());
                let r = norm3(&y);
                let w = scale3(&y, 1.0 / r);
                // A (I - w w^t) A^t / |A^t u|
                let mut inner = mat_identity();
                for i in 0..3 {
                    for j in 0..3 {
                        inner[i][j] -= w[i] * w[j];
                    }
                }
                let am = a.mat3();
                let mut out = mat_mul(&mat_mul(am, &inner), &mat_transpose(am));
                for row in &mut out {
                    for v in row.iter_mut() {
                        *v /= r;
                    }
                }
                Some(out)
            }
            Shape::Fourier(f) => {
                let theta = u.angle();
                let fval = f.curvature(theta);
                let t = [-u.raw()[1], u.raw()[0], 0.0];
                let mut m = [[0.0; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        m[i][j] = fval * t[i] * t[j];
                    }
                }
                Some(m)
            }
            Shape::Perturbed(p) => {
                let h = |v: &[f64; 3]| p.support(v);
                Some(fd::hessian(&h, u.raw(), 3, fd::HESSIAN_STEP))
            }
            Shape::Mapped(t, k) => {
                let y = t.apply_transpose3(u.raw());
                let r = norm3(&y);
                let inner_dir = Dir::from_raw(self.dim, scale3(&y, 1.0 / r));
                match k.hess_extension(&inner_dir)? {
                    None => None,
                    Some(hk) => {
                        let tm = t.mat3();
                        let mut out = mat_mul(&mat_mul(tm, &hk), &mat_transpose(tm));
                        for row in &mut out {
                            for v in row.iter_mut() {
                                *v /= r;
                            }
                        }
                        Some(out)
                    }
                }
            }
            Shape::Translate(k, _) => k.hess_extension(u)?,
            Shape::Polar(..) => None,
        })
    }

    /// Smallest eigenvalue of the curvature operator at u; falls back to
    /// the curvature function when no Hessian is available.
    fn min_curvature_eig(&self, u: &Dir) -> Result<f64> {
        if self.dim == 2 {
            return self.curvature_raw(u);
        }
        match self.hess_extension(u)? {
            None => self.curvature_raw(u),
            Some(m) => {
                let (e1, e2) = tangent_frame(u.raw());
                let me1 = mat_vec(&m, &e1);
                let me2 = mat_vec(&m, &e2);
                let (a, b, d) = (dot3(&e1, &me1), dot3(&e1, &me2), dot3(&e2, &me2));
                Ok(sym2_eigenvalues(a, b, d).0)
            }
        }
    }

    /// The linear image T K, with exact composition: mapping a mapped
    /// body multiplies the matrices.
    pub fn linear_image(&self, t: &LinearMap) -> Result<SupportBody> {
        if t.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: t.dim() });
        }
        match &self.shape {
            Shape::Ball => Self::validated(self.dim, Shape::Ellipsoid(t.clone())),
            Shape::Ellipsoid(a) => Self::validated(self.dim, Shape::Ellipsoid(t.compose(a))),
            Shape::Mapped(s, k) => {
                Self::validated(self.dim, Shape::Mapped(t.compose(s), k.clone()))
            }
            _ => Self::validated(self.dim, Shape::Mapped(t.clone(), Arc::new(self.clone()))),
        }
    }

    /// Uniform dilation lambda K.
    pub fn dilate(&self, lambda: f64) -> Result<SupportBody> {
        self.linear_image(&LinearMap::dilation(self.dim, lambda)?)
    }

    /// Translation K + c.
    pub fn translate(&self, c: &[f64]) -> Result<SupportBody> {
        if c.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: c.len() });
        }
        let mut shift = [0.0; 3];
        shift[..self.dim].copy_from_slice(c);
        match &self.shape {
            Shape::Translate(k, c0) => {
                Self::validated(self.dim, Shape::Translate(k.clone(), add3(c0, &shift)))
            }
            _ => Self::validated(
                self.dim,
                Shape::Translate(Arc::new(self.clone()), shift),
            ),
        }
    }

    /// The polar body. Balls and ellipsoids polarize in closed form; any
    /// other representation becomes a numerically polarized body.
    pub fn polar(&self) -> Result<SupportBody> {
        match &self.shape {
            Shape::Ball => SupportBody::ball(self.dim),
            Shape::Ellipsoid(a) => Self::validated(
                self.dim,
                Shape::Ellipsoid(a.inverse_transpose()),
            ),
            _ => Self::validated(
                self.dim,
                Shape::Polar(Arc::new(self.clone()), Arc::new(PolarCache::default())),
            ),
        }
    }

    /// Volume via (1/n) * integral of h f over the sphere.
    pub fn volume(&self, rule: &SphereRule) -> Result<f64> {
        self.check_rule(rule)?;
        let n = self.dim as f64;
        let v = rule.try_integrate(|u| {
            Ok(self.support_dir(u)? * self.curvature_raw(u)?)
        })?;
        Ok(v / n)
    }

    /// Volume of the polar body via the radial identity rho_{K*} = 1/h_K,
    /// without constructing the polar.
    pub fn polar_volume(&self, rule: &SphereRule) -> Result<f64> {
        self.check_rule(rule)?;
        let n = self.dim as i32;
        let v = rule.try_integrate(|u| Ok(self.support_dir(u)?.powi(-n)))?;
        Ok(v / n as f64)
    }

    /// Centroid by the divergence theorem:
    /// centroid_i = (1/((n+1)|K|)) * integral of x_i(u) h(u) f(u).
    pub fn centroid(&self, rule: &SphereRule) -> Result<Vec<f64>> {
        self.check_rule(rule)?;
        let n = self.dim;
        let vol = self.volume(rule)?;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let m = rule.try_integrate(|u| {
                Ok(self.boundary_dir(u)?[i] * self.support_dir(u)? * self.curvature_raw(u)?)
            })?;
            out.push(m / ((n as f64 + 1.0) * vol));
        }
        Ok(out)
    }

    /// Recenters the body so its centroid lands at the origin.
    pub fn translate_to_centroid(&self, rule: &SphereRule) -> Result<SupportBody> {
        let c = self.centroid(rule)?;
        let shift: Vec<f64> = c.iter().map(|x| -x).collect();
        self.translate(&shift)
    }

    /// The origin-symmetric ball of the same volume.
    pub fn ball_of_same_volume(&self, rule: &SphereRule) -> Result<SupportBody> {
        let vol = self.volume(rule)?;
        let r = (vol / unit_ball_volume(self.dim)).powf(1.0 / self.dim as f64);
        SupportBody::ball(self.dim)?.dilate(r)
    }

    fn check_rule(&self, rule: &SphereRule) -> Result<()> {
        if rule.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: rule.dim() });
        }
        Ok(())
    }

    /// Document form for serialization and report digests.
    pub fn descriptor(&self) -> BodyDoc {
        match &self.shape {
            Shape::Ball => BodyDoc::Ball,
            Shape::Ellipsoid(a) => BodyDoc::LinearImage { matrix: a.rows() },
            Shape::Fourier(f) => BodyDoc::Fourier2d {
                c0: f.c0,
                cos: f.cos.clone(),
                sin: f.sin.clone(),
            },
            Shape::Perturbed(p) => BodyDoc::PerturbedBall3d {
                eps: p.eps,
                poly: p.poly.clone(),
            },
            Shape::Mapped(t, k) => BodyDoc::Mapped {
                matrix: t.rows(),
                body: Box::new(k.descriptor()),
            },
            Shape::Translate(k, c) => BodyDoc::Translate {
                body: Box::new(k.descriptor()),
                by: c[..self.dim].to_vec(),
            },
            Shape::Polar(k, _) => BodyDoc::Polar { body: Box::new(k.descriptor()) },
        }
    }
}

/// JSON document form of a body description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum BodyDoc {
    Ball,
    LinearImage { matrix: Vec<Vec<f64>> },
    Fourier2d { c0: f64, cos: Vec<f64>, sin: Vec<f64> },
    PerturbedBall3d { eps: f64, poly: Vec<f64> },
    Translate { body: Box<BodyDoc>, by: Vec<f64> },
    Polar { body: Box<BodyDoc> },
    Mapped { matrix: Vec<Vec<f64>>, body: Box<BodyDoc> },
}

impl BodyDoc {
    /// Builds and validates the described body. A bare ball needs the
    /// ambient dimension from context.
    pub fn build(&self, dim_hint: Option<usize>) -> Result<SupportBody> {
        match self {
            BodyDoc::Ball => {
                let n = dim_hint.ok_or_else(|| {
                    Error::Validation("ball document needs an ambient dimension".into())
                })?;
                SupportBody::ball(n)
            }
            BodyDoc::LinearImage { matrix } => {
                let n = matrix.len();
                SupportBody::ellipsoid(LinearMap::new(n, matrix)?)
            }
            BodyDoc::Fourier2d { c0, cos, sin } => {
                SupportBody::fourier2d(*c0, cos.clone(), sin.clone())
            }
            BodyDoc::PerturbedBall3d { eps, poly } => {
                SupportBody::perturbed_ball(*eps, poly.clone())
            }
            BodyDoc::Translate { body, by } => body.build(dim_hint)?.translate(by),
            BodyDoc::Polar { body } => body.build(dim_hint)?.polar(),
            BodyDoc::Mapped { matrix, body } => {
                let n = matrix.len();
                body.build(Some(n))?.linear_image(&LinearMap::new(n, matrix)?)
            }
        }
    }
}

/// det(M + u u^t): fills the radial null direction of the extension
/// Hessian with a unit eigenvalue, leaving the tangential determinant.
fn det_with_radial(m: &Mat3, u: &[f64; 3]) -> f64 {
    let mut a = *m;
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] += u[i] * u[j];
        }
    }
    mat_det(&a, 3)
}

const RANDOM_MAX_ATTEMPTS: usize = 400;

/// Options for random body generation.
#[derive(Debug, Clone, Copy)]
pub struct RandomBodyOptions {
    pub dim: usize,
    /// Lower bound for the convexity margin.
    pub roundness: f64,
    /// Highest Fourier harmonic (planar) — ignored for spatial bodies.
    pub degree: usize,
    /// Restrict to even harmonics so the body is origin-symmetric.
    /// Spatial perturbed balls are always symmetric.
    pub symmetric: bool,
}

/// Deterministic random body: same seed, same coefficients.
pub fn random_body(seed: u64, opts: &RandomBodyOptions) -> Result<SupportBody> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_body_with_rng(&mut rng, opts)
}

pub fn random_body_with_rng<R: Rng>(rng: &mut R, opts: &RandomBodyOptions) -> Result<SupportBody> {
    if !(opts.roundness > 0.0 && opts.roundness < 1.0) {
        return Err(Error::Validation(format!(
            "roundness {} must lie strictly between 0 and 1",
            opts.roundness
        )));
    }
    match opts.dim {
        2 => random_fourier(rng, opts),
        3 => random_perturbed(rng, opts),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

fn random_fourier<R: Rng>(rng: &mut R, opts: &RandomBodyOptions) -> Result<SupportBody> {
    if opts.degree < 2 {
        return Err(Error::Validation(format!(
            "Fourier degree {} must be at least 2",
            opts.degree
        )));
    }
    for _ in 0..RANDOM_MAX_ATTEMPTS {
        let harmonics = opts.degree - 1;
        let mut cos = vec![0.0; harmonics];
        let mut sin = vec![0.0; harmonics];
        for (i, (a, b)) in cos.iter_mut().zip(sin.iter_mut()).enumerate() {
            let k = i + 2;
            if opts.symmetric && k % 2 == 1 {
                continue;
            }
            let scale = 1.0 / (k * k) as f64;
            *a = rng.gen_range(-1.0..1.0) * scale;
            *b = rng.gen_range(-1.0..1.0) * scale;
        }
        // Scale the draw so the curvature margin lands at a chosen target.
        let curvature_dip = (0..2048)
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / 2048.0;
                let mut dip = 0.0;
                for (i, (a, b)) in cos.iter().zip(&sin).enumerate() {
                    let k = (i + 2) as f64;
                    let (s, c) = (k * theta).sin_cos();
                    dip += (1.0 - k * k) * (a * c + b * s);
                }
                -dip
            })
            .fold(f64::NEG_INFINITY, f64::max);
        if curvature_dip < 1e-9 {
            continue;
        }
        let hi = (opts.roundness + 0.65).min(0.92);
        let lo = (opts.roundness + 0.02).min(0.5 * (opts.roundness + hi));
        let target = rng.gen_range(lo..hi);
        let alpha = (1.0 - target) / curvature_dip;
        for (a, b) in cos.iter_mut().zip(sin.iter_mut()) {
            *a *= alpha;
            *b *= alpha;
        }
        match SupportBody::fourier2d(1.0, cos, sin) {
            Ok(body) if body.margin() >= opts.roundness => return Ok(body),
            _ => continue,
        }
    }
    Err(Error::RejectionExhausted { attempts: RANDOM_MAX_ATTEMPTS, degree: opts.degree })
}

fn random_perturbed<R: Rng>(rng: &mut R, opts: &RandomBodyOptions) -> Result<SupportBody> {
    for _ in 0..RANDOM_MAX_ATTEMPTS {
        let mut poly: Vec<f64> = (0..EVEN_BASIS.len())
            .map(|i| {
                let damp = if i < 6 { 1.0 } else { 0.5 };
                rng.gen_range(-1.0..1.0) * damp
            })
            .collect();
        // Normalize sup |p| to one on the validation grid.
        let probe = PerturbedBall::new(1.0, poly.clone())?;
        let pmax = validation_dirs(3)
            .iter()
            .map(|u| probe.poly_value(u.raw()).abs())
            .fold(0.0f64, f64::max);
        if pmax < 1e-9 {
            continue;
        }
        for c in &mut poly {
            *c /= pmax;
        }
        let unit = PerturbedBall::new(1.0, poly.clone())?;
        // The curvature operator of h = 1 + eps*p is I + eps*B(u) with B
        // the tangential Hessian block of the extension of p alone, so its
        // smallest eigenvalue is linear in eps; one sweep of B fixes the
        // admissible range.
        let mut beta = f64::INFINITY;
        for u in validation_dirs(3) {
            let p_eval = |v: &[f64; 3]| unit.poly_value(v);
            let hess = fd::hessian(&p_eval, u.raw(), 3, fd::HESSIAN_STEP);
            let (e1, e2) = tangent_frame(u.raw());
            let me1 = mat_vec(&hess, &e1);
            let me2 = mat_vec(&hess, &e2);
            let (a, b, d) = (dot3(&e1, &me1), dot3(&e1, &me2), dot3(&e2, &me2));
            beta = beta.min(sym2_eigenvalues(a, b, d).0);
        }
        let hi = (opts.roundness + 0.5).min(0.8);
        let lo = (opts.roundness + 0.02).min(0.5 * (opts.roundness + hi));
        let target = rng.gen_range(lo..hi);
        let mut eps = if beta < 0.0 { (1.0 - target) / (-beta) } else { 0.3 };
        eps = eps.min(0.45);
        match SupportBody::perturbed_ball(eps, poly) {
            Ok(body) if body.margin() >= opts.roundness => return Ok(body),
            _ => continue,
        }
    }
    Err(Error::RejectionExhausted { attempts: RANDOM_MAX_ATTEMPTS, degree: 4 })
}
