//! Kernels for initial points y_j = F⁻¹(j) with a slowly varying counting
//! function F, compared at large heights with the equidistant lattice of
//! the local spacing.

mod config;
mod counting;
mod facts;
mod height;
mod unfold;

pub use config::{GeneralConfiguration, IndexData};
pub use counting::{
    check_conditions, counting_function, invert_counting, invert_f, ConditionCheck, CountingFunction, PowerCounting,
    Unfolding, ZetaCounting, COUNTING_FUNCTIONS,
};
pub use facts::{check_facts, Facts};
pub use height::{
    compare_at_height, local_sine_error, locate_m, surrogate_model, t0, HeightComparison, Located, Surrogate, XI_TAIL,
};
pub use unfold::{log_log_level, unfolded_model, UnfoldedModel};
