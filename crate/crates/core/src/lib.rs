//! Spectral geometry of thin convex planar domains.
//!
//! The crate computes Neumann eigenvalues of convex polygons with P1 finite
//! elements, eigenvalues of the one-dimensional weighted problem obtained by
//! collapsing a body onto its diameter, and the Bessel-function constants that
//! bound both; the `harness` module runs the cross-checks between them.

pub mod check;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod segment;
pub mod special;
pub mod spectrum;

pub use error::{Error, Result};
