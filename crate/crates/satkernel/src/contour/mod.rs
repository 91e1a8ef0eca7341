//! Finite-N kernels as double contour integrals and as residue sums, and the
//! N = ∞ absorbing kernel for general initial points.
//!
//! All line integrals run along Γ_L: w = L + it, t ∈ ℝ, by the trapezoid rule
//! with nodes at t = (j + ½)h. Closed contours are rectangles integrated with
//! Gauss–Legendre panels.

mod finite;
mod infinite;
mod lines;

use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::kernels::{Boundary, EndTime};

pub use finite::{
    finite_kernel_handle, kernel_finite_boundary, kernel_finite_free, kernel_finite_st,
    kernel_finite_st_residue, refined, Form,
};
pub use infinite::{kernel_infinite_absorbing, segment_term, InfiniteAbsorbing};

/// Contour and quadrature choices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    /// Abscissa L of Γ_L. `None` puts the line next to the Gaussian saddle.
    pub l_offset: Option<f64>,
    /// Half-height of the rectangles around the poles (finite N), or the
    /// height of the lines γ_M (infinite N).
    pub m: Option<f64>,
    /// Half-length of the truncated line. `None` stops once the integrand
    /// envelope has dropped below 1e−18 of its peak.
    pub trunc: Option<f64>,
    /// Quadrature density: the trapezoid step is the smaller of the Gaussian
    /// width and the pole distance, divided by this number.
    pub nodes_per_unit: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec { l_offset: None, m: None, trunc: None, nodes_per_unit: 8 }
    }
}

impl ContourSpec {
    pub fn with_l(mut self, l: f64) -> Self {
        self.l_offset = Some(l);
        self
    }

    pub fn with_m(mut self, m: f64) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_nodes(mut self, nodes_per_unit: usize) -> Self {
        self.nodes_per_unit = nodes_per_unit;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.nodes_per_unit < 2 {
            return config(format!("nodes_per_unit must be at least 2, got {}", self.nodes_per_unit));
        }
        if let Some(m) = self.m {
            if !(m > 0.0) {
                return config(format!("contour height must be positive, got {m}"));
            }
        }
        if let Some(t) = self.trunc {
            if !(t > 0.0) {
                return config(format!("truncation must be positive, got {t}"));
            }
        }
        Ok(())
    }
}

/// N paths from y₁ < … < y_N. For the free model with finite T the paths end
/// at z_j = a(j − n), j = 0..2n, so N = 2n + 1 must be odd.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteModel {
    pub y: Vec<f64>,
    pub a: f64,
    pub s: f64,
    pub t: EndTime,
    pub boundary: Boundary,
}

impl FiniteModel {
    pub fn new(y: Vec<f64>, a: f64, s: f64, t: EndTime, boundary: Boundary) -> Result<Self> {
        if y.is_empty() {
            return config("no initial points");
        }
        if let Some(i) = y.windows(2).position(|w| !(w[1] > w[0])) {
            return config(format!("initial points not strictly increasing at index {}", i + 1));
        }
        if y.iter().any(|x| !x.is_finite()) {
            return config("initial points must be finite");
        }
        if !(a > 0.0) || !(s > 0.0) {
            return config(format!("spacing and time must be positive, got a = {a}, S = {s}"));
        }
        if let EndTime::Finite(t) = t {
            if !(t > 0.0) {
                return config(format!("end time must be positive, got {t}"));
            }
        }
        match boundary {
            Boundary::Free => {
                if matches!(t, EndTime::Finite(_)) && y.len().is_multiple_of(2) {
                    return config(format!("finite-T model needs an odd number of paths, got {}", y.len()));
                }
            }
            Boundary::Absorbing | Boundary::Reflecting => {
                if y[0] <= 0.0 {
                    return config("half-line models need all initial points > 0");
                }
                if t != EndTime::Infinite {
                    return config("half-line models are implemented for T = infinity only");
                }
            }
        }
        Ok(FiniteModel { y, a, s, t, boundary })
    }

    /// Free model with y_j = Δ + a(j − n), j = 0..2n.
    pub fn equidistant(points: usize, a: f64, s: f64, t: EndTime, delta: f64) -> Result<Self> {
        if points.is_multiple_of(2) {
            return config(format!("equidistant model needs an odd number of paths, got {points}"));
        }
        let n = (points / 2) as f64;
        let y = (0..points).map(|j| delta + a * (j as f64 - n)).collect();
        Self::new(y, a, s, t, Boundary::Free)
    }

    /// Half-line model with T = ∞.
    pub fn half_line(y: Vec<f64>, s: f64, boundary: Boundary) -> Result<Self> {
        Self::new(y, 1.0, s, EndTime::Infinite, boundary)
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}
