//! Approximation and hardness machinery for Set Cover and Directed Steiner
//! Tree on rooted instances.
//!
//! - [`greedy`]: Chvátal's greedy set cover and its submodular form.
//! - [`exact`]: shortest paths, the directed Dreyfus–Wagner dynamic program
//!   and brute-force oracles.
//! - [`dst_core`]: φ-core extraction, bounded greedy covers and the
//!   core-guessing approximation for Directed Steiner Tree.
//! - [`reductions`]: the Label Cover → Set Cover pipeline with verifiers.
//! - [`generate`]: seeded instance generators.
//! - [`formats`]: text and JSON file formats.

pub mod dst_core;
pub mod exact;
pub mod formats;
pub mod generate;
pub mod greedy;
pub mod instances;
pub mod rational;
pub mod reductions;

pub use dst_core::{dst_approx, CoreCap, DstApproxOptions, DstApproxOutcome};
pub use exact::{brute_force_dst, brute_force_set_cover, dreyfus_wagner_directed};
pub use greedy::{chvatal_bound, greedy_set_cover};
pub use instances::{
    ArborescenceSolution, Arc, CoverSolution, DstInstance, LabelCoverInstance, Labeling, ListLabeling,
    SetCoverInstance, ValidationReport, WeightedSet,
};
pub use rational::Rational;
