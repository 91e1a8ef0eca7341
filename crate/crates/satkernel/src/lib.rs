//! Correlation kernels of non-intersecting Brownian paths started from
//! (nearly) equidistant points, their number variance and gap
//! probabilities, and an exact Monte Carlo sampler for cross-validation.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod quad;
pub mod specfun;
pub mod kernels;
pub mod contour;
pub mod variance;
pub mod approx;
pub mod gap;
pub mod mcsim;
pub mod registry;
pub mod acceptance;

pub use error::{Error, Result};
