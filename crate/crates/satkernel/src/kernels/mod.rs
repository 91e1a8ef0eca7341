//! Limiting correlation kernels of the equidistant models, boundary
//! variants, averaged pair products, sine and Bessel limit kernels.

mod basic;
mod equidistant;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use basic::{bessel_kernel, boundary_combine, BoundaryMode, rescale, rescaled_bessel, sine_kernel, sinc};
pub use equidistant::{
    averaged_pair_product, kernel_ls, kernel_ls_approx, kernel_lss, kernel_lss_approx, ls_series,
    lss_approx_unit, lss_theta, PairKind,
};

/// Boundary condition at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Free,
    Absorbing,
    Reflecting,
}

/// Endpoint time of the paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EndTime {
    Infinite,
    Finite(f64),
}

/// Paths started from y_j = Δ + a·j, observed at time S.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquidistantModel {
    pub a: f64,
    pub s: f64,
    pub delta: f64,
    pub boundary: Boundary,
    pub t: EndTime,
    d: f64,
}

impl EquidistantModel {
    pub fn new(a: f64, s: f64, delta: f64, boundary: Boundary, t: EndTime) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return domain(format!("spacing a must be positive, got {a}"));
        }
        if !(s > 0.0 && s.is_finite()) {
            return domain(format!("time S must be positive, got {s}"));
        }
        if !(0.0..a).contains(&delta) {
            return domain(format!("offset must lie in [0, a), got {delta}"));
        }
        if let EndTime::Finite(t) = t {
            if !(t > 0.0) {
                return domain(format!("end time must be positive, got {t}"));
            }
        }
        let d = 2.0 * std::f64::consts::PI * s / (a * a);
        Ok(EquidistantModel { a, s, delta, boundary, t, d })
    }

    /// Free model with T = ∞.
    pub fn free(a: f64, s: f64) -> Result<Self> {
        Self::new(a, s, 0.0, Boundary::Free, EndTime::Infinite)
    }

    /// Free model with T = ∞ and the time chosen so that 2πS/a² = d.
    pub fn with_d(a: f64, d: f64) -> Result<Self> {
        Self::free(a, d * a * a / (2.0 * std::f64::consts::PI))
    }

    /// The (S,S) model with the time chosen so that 2πS/a² = d.
    pub fn ss_with_d(a: f64, d: f64) -> Result<Self> {
        let s = d * a * a / (2.0 * std::f64::consts::PI);
        Self::new(a, s, 0.0, Boundary::Free, EndTime::Finite(s))
    }

    pub fn with_offset(mut self, delta: f64) -> Result<Self> {
        if !(0.0..self.a).contains(&delta) {
            return domain(format!("offset must lie in [0, a), got {delta}"));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    /// Saturation parameter d = 2πS/a².
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn is_ss(&self) -> bool {
        matches!(self.t, EndTime::Finite(t) if (t - self.s).abs() <= 1e-12 * self.s)
    }
}

/// Support of a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelDomain {
    WholeLine,
    HalfLine,
}

/// How a kernel is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Series,
    Theta,
    Approximate,
    Contour,
    Composite,
}

/// Large-distance behaviour of K(x,y)K(y,x), used for tail corrections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FarField {
    /// Mean decay coeff/(x−y)² with an oscillating remainder bounded by
    /// `remainder`/(x−y)².
    InverseSquare { coeff: f64, remainder: f64 },
    /// Decay like exp(−rate·|x−y|) times `scale`.
    Exponential { rate: f64, scale: f64 },
    /// Unknown; no tail correction.
    Unknown,
}

/// An evaluable two-point kernel with metadata.
#[derive(Clone)]
pub struct KernelHandle {
    eval: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    pub domain: KernelDomain,
    pub representation: Representation,
    pub symmetric: bool,
    pub far_field: FarField,
    pub label: String,
}

impl std::fmt::Debug for KernelHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelHandle")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("representation", &self.representation)
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

impl KernelHandle {
    pub fn new(
        label: impl Into<String>,
        domain: KernelDomain,
        representation: Representation,
        symmetric: bool,
        far_field: FarField,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        KernelHandle {
            eval: Arc::new(eval),
            domain,
            representation,
            symmetric,
            far_field,
            label: label.into(),
        }
    }

    #[inline]
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    /// K(x,y)·K(y,x); the only combination visible in pair correlations.
    #[inline]
    pub fn pair(&self, x: f64, y: f64) -> f64 {
        if self.symmetric {
            let k = self.evaluate(x, y);
            k * k
        } else {
            self.evaluate(x, y) * self.evaluate(y, x)
        }
    }

    /// Same kernel with different metadata.
    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The zero kernel.
    pub fn zero() -> Self {
        KernelHandle::new("zero", KernelDomain::WholeLine, Representation::Composite, true, FarField::Unknown, |_, _| 0.0)
    }
}
