//! Discrete Laplace-Beltrami operators on triangle meshes and the inverse
//! problem of recovering edge lengths from cotangent weights.
//!
//! The forward direction ([`laplace`]) turns an edge-length metric into
//! cotangent edge weights, the Laplace matrix, its spectrum and the heat
//! kernel. The inverse direction ([`recover`]) minimizes a convex energy
//! ([`energy`]) whose gradient is the weight mismatch, returning the metric
//! up to a global scale.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod energy;
pub mod error;
pub mod formats;
mod kkt;
pub mod laplace;
pub mod mesh;
pub mod metric;
pub mod quadrature;
pub mod recover;
pub mod shapes;

pub use error::{Error, Result};
pub use kkt::DENSE_LIMIT;
