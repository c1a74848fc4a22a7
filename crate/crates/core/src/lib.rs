//! Fill-rate models and simulation for single-echelon reorder-point
//! inventory systems.

// `!(x > 0.0)` style checks are used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod config;
pub mod error;
pub mod normal;
pub mod sim;
pub mod validation;

pub use analytic::{
    DemandSpec, LeadTimeDemandMoments, LeadTimeDistribution, ModelKind, ModelPrediction,
    ReviewMoments, UnfulfilledDemandMode,
};
pub use error::{Error, Result};
pub use normal::CdfKind;
