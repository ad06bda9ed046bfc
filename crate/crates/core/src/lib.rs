//! Numerical laboratory for rotationally symmetric asymptotically hyperbolic
//! 3-manifolds: Hawking mass and stability of centered spheres, the
//! centered-ball isoperimetric profile, the conformal toolkit on the unit
//! sphere, least-squares checks of asymptotic expansions, and a shipped
//! family whose centered spheres fail to be isoperimetric.

// `!(x > 0.0)` is deliberate: NaN must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conformal;
pub mod counterexample;
pub mod error;
pub mod fit;
pub mod metric;
pub mod profile;
pub mod quadrature;
pub mod sphere;

pub use error::{LabError, Result};
