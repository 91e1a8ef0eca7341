//! Special functions: Jacobi theta functions, Si/Ci, the auxiliary
//! integrals f and g, Bessel J and canonical products.

mod bessel;
mod fg;
mod product;
mod sici;
mod theta;

pub use bessel::{bessel_j, BESSEL_CROSSOVER};
pub(crate) use bessel::j_any;
pub use fg::{fg, oscillatory, FG_CROSSOVER};
pub use product::{canonical_product, EvenProduct, PointSequence, Tail};
pub use sici::{cos_integral, si_ci, sin_integral, SICI_CROSSOVER};
pub use theta::{theta, theta1_scaled_over_x, theta_imag_scaled, theta_real, ThetaArg};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;
