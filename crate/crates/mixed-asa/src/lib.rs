//! Numerical toolkit for mixed affine surface areas of smooth convex
//! bodies in the plane and in space.
//!
//! The crate represents C2+ convex bodies through their support
//! functions, evaluates the general mixed affine surface area functionals
//! (concave and convex weight classes, plain and starred, plus their
//! i-th mixed interpolants and the classical L_p scale), and ships an
//! inequality-verification harness that checks the affine invariance,
//! duality, Alexandrov-Fenchel, Santalo and isoperimetric laws these
//! functionals satisfy, over randomized inputs with structured reports.
//!
//! The guide in `book/` walks through the concepts chapter by chapter;
//! its code snippets compile and run as doctests of this crate.

pub mod body;
pub mod error;
pub mod geom;
pub mod quadrature;
pub mod scalar;

pub use body::{
    random_body, random_body_with_rng, unit_ball_volume, BodyDoc, FourierBody, LinearMap,
    PerturbedBall, RandomBodyOptions, SupportBody,
};
pub use error::{Error, Result};
pub use geom::Dir;
pub use quadrature::SphereRule;
pub use scalar::{validate_class, NamedFn, ScalarClassFn, ScalarDoc, ScalarKind};
