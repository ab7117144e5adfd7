//! Small fixed-dimension vector/matrix helpers.
//!
//! Everything in this crate lives in dimension 2 or 3, known only at run
//! time. Vectors are stored as `[f64; 3]` with the third component zero in
//! the planar case, which keeps the hot evaluation paths allocation-free.

use crate::error::{Error, Result};

pub(crate) const UNIT_TOL: f64 = 1e-8;

/// A direction on the unit sphere, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dir {
    n: usize,
    v: [f64; 3],
}

impl Dir {
    pub fn new(coords: &[f64]) -> Result<Self> {
        let n = coords.len();
        if n != 2 && n != 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut v = [0.0; 3];
        v[..n].copy_from_slice(coords);
        let norm = norm3(&v);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(Dir { n, v })
    }

    /// Normalizes a nonzero vector onto the sphere.
    pub fn normalized(coords: &[f64]) -> Result<Self> {
        let n = coords.len();
        if n != 2 && n != 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut v = [0.0; 3];
        v[..n].copy_from_slice(coords);
        let norm = norm3(&v);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotUnit { norm });
        }
        for x in &mut v {
            *x /= norm;
        }
        Ok(Dir { n, v })
    }

    pub(crate) fn from_raw(n: usize, v: [f64; 3]) -> Self {
        debug_assert!((norm3(&v) - 1.0).abs() < 1e-6);
        Dir { n, v }
    }

    pub fn from_angle(theta: f64) -> Self {
        Dir { n: 2, v: [theta.cos(), theta.sin(), 0.0] }
    }

    /// Polar angle of a planar direction.
    pub fn angle(&self) -> f64 {
        debug_assert_eq!(self.n, 2);
        self.v[1].atan2(self.v[0])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.v[..self.n]
    }

    pub(crate) fn raw(&self) -> &[f64; 3] {
        &self.v
    }

    pub fn dot(&self, other: &[f64; 3]) -> f64 {
        dot3(&self.v, other)
    }

    /// Exact bit pattern, used as a memoization key.
    pub(crate) fn key(&self) -> [u64; 3] {
        [self.v[0].to_bits(), self.v[1].to_bits(), self.v[2].to_bits()]
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub(crate) fn sub3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale3(a: &[f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// 3x3 column-major-agnostic dense matrix; row-major storage.
pub(crate) type Mat3 = [[f64; 3]; 3];

/// Identity padded to 3x3; the unused trailing block stays identity so
/// determinants and inverses of the n-by-n part are unaffected.
pub(crate) fn mat_identity() -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub(crate) fn mat_vec(m: &Mat3, v: &[f64; 3]) -> [f64; 3] {
    [dot3(&m[0], v), dot3(&m[1], v), dot3(&m[2], v)]
}

pub(crate) fn mat_transpose(m: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub(crate) fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, bk) in b.iter().enumerate() {
                c[i][j] += a[i][k] * bk[j];
            }
        }
    }
    c
}

/// Determinant of the top-left n-by-n block (the rest is padded identity).
pub(crate) fn mat_det(m: &Mat3, n: usize) -> f64 {
    match n {
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!("dimension checked at construction"),
    }
}

pub(crate) fn mat_inverse(m: &Mat3, n: usize) -> Option<Mat3> {
    let det = mat_det(m, n);
    if det.abs() < 1e-300 {
        return None;
    }
    let mut inv = mat_identity();
    match n {
        2 => {
            inv[0][0] = m[1][1] / det;
            inv[0][1] = -m[0][1] / det;
            inv[1][0] = -m[1][0] / det;
            inv[1][1] = m[0][0] / det;
        }
        3 => {
            let c = |r: usize, s: usize| -> f64 {
                let (r1, r2) = match r {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let (s1, s2) = match s {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let minor = m[r1][s1] * m[r2][s2] - m[r1][s2] * m[r2][s1];
                if (r + s) % 2 == 0 {
                    minor
                } else {
                    -minor
                }
            };
            for i in 0..3 {
                for j in 0..3 {
                    inv[i][j] = c(j, i) / det;
                }
            }
        }
        _ => unreachable!(),
    }
    Some(inv)
}

/// Eigenvalues of a symmetric 2x2 matrix.
pub(crate) fn sym2_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
    let tr = a + d;
    let disc = ((a - d) * (a - d) / 4.0 + b * b).max(0.0).sqrt();
    (tr / 2.0 - disc, tr / 2.0 + disc)
}

/// An orthonormal basis of the tangent plane at `u` on the 2-sphere.
pub(crate) fn tangent_frame(u: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pick = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let mut e1 = sub3(&pick, &scale3(u, dot3(&pick, u)));
    let n1 = norm3(&e1);
    e1 = scale3(&e1, 1.0 / n1);
    let e2 = [
        u[1] * e1[2] - u[2] * e1[1],
        u[2] * e1[0] - u[0] * e1[2],
        u[0] * e1[1] - u[1] * e1[0],
    ];
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dir_rejects_non_unit() {
        assert!(Dir::new(&[1.0, 1.0]).is_err());
        assert!(Dir::new(&[0.6, 0.8]).is_ok());
        assert!(Dir::new(&[1.0]).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m: Mat3 = [[1.0, 2.0, 0.25], [0.0, 3.0, -1.0], [0.5, 0.0, 2.0]];
        let inv = mat_inverse(&m, 3).unwrap();
        let id = mat_mul(&m, &inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[i][j] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tangent_frame_is_orthonormal() {
        let u = [0.6, 0.0, 0.8];
        let (e1, e2) = tangent_frame(&u);
        assert!(dot3(&e1, &u).abs() < 1e-14);
        assert!(dot3(&e2, &u).abs() < 1e-14);
        assert!(dot3(&e1, &e2).abs() < 1e-14);
        assert!((norm3(&e1) - 1.0).abs() < 1e-14);
        assert!((norm3(&e2) - 1.0).abs() < 1e-14);
    }
}
