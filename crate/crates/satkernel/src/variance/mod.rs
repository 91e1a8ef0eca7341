//! Number variance of the particle count in an interval [R, R+L]: direct
//! quadrature for any kernel plus closed forms for the equidistant models.

mod closed;
mod direct;

use serde::{Deserialize, Serialize};

pub use closed::{
    d_for_level, saturation_level, saturation_level_d, offset_variance, variance_averaged, variance_sine_closed, FourthBlock, variance_offset,
    variance_un, variance_vd, vd_limit,
};
pub use direct::{variance_direct, variance_direct_with, DirectOptions};

/// Which engine produced a [`VarianceReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMethod {
    Direct,
    ClosedForm,
    Averaged,
    Vd,
    Sine,
    Un,
}

impl VarianceMethod {
    pub fn name(self) -> &'static str {
        match self {
            VarianceMethod::Direct => "direct",
            VarianceMethod::ClosedForm => "closed",
            VarianceMethod::Averaged => "averaged",
            VarianceMethod::Vd => "vd",
            VarianceMethod::Sine => "sine",
            VarianceMethod::Un => "un",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub r: f64,
    pub l: f64,
    pub value: f64,
    pub method: VarianceMethod,
    pub err_estimate: f64,
    /// set when the tail bound is large compared with the value
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl VarianceReport {
    pub(crate) fn exact(r: f64, l: f64, value: f64, method: VarianceMethod) -> Self {
        VarianceReport { r, l, value, method, err_estimate: 1e-15 * value.abs().max(1.0), warning: None }
    }
}
