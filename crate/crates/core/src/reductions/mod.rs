//! Label Cover → Set Cover hardness pipeline, executable on small instances.
//!
//! The stages are: an agreement-soundness transform that rewires the B side
//! through a disperser graph, a partition system, and the gadget that turns
//! each `(a, σ)` into a set over `B × U`. The explicit combinatorial objects
//! are replaced by seeded random constructions, each paired with a verifier,
//! and every soundness quantity is measured on the concrete instance.

mod disperser;
mod gadget;
mod labeling;
mod partition;
mod pipeline;
mod schedule;

pub use disperser::{agreement_reduction, build_disperser, verify_disperser, DisperserCheck, DisperserGraph};
pub use gadget::{lc_to_set_cover, planted_cover, GadgetLayout};
pub use labeling::{
    best_labeling, measure_agreement_soundness, non_disagreeing, BestLabeling, LabelingMethod, SoundnessMeasurement,
    SoundnessMode, DEFAULT_ASSIGNMENT_BUDGET,
};
pub use partition::{build_partition_system, verify_partition_system, PartitionCheck, PartitionSystem};
pub use pipeline::{run_pipeline, PipelineAudit, PipelineConfig, PipelineOutput};
pub use schedule::{is_prime_power, schedule_params, smallest_prime_power_at_least, ReductionParams};

use thiserror::Error;

use crate::exact::ExactError;
use crate::generate::GenerateError;
use crate::instances::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("{what} = {actual} exceeds the exhaustive budget of {budget}")]
    BudgetExceeded { what: &'static str, actual: u128, budget: u128 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("B-degree {actual} does not match the disperser's |U| = {expected}")]
    DegreeMismatch { expected: usize, actual: usize },
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("invalid instance: {0}")]
    Invalid(ValidationReport),
    #[error("the instance is not bi-regular")]
    NotBiregular,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
}
