//! Core-guessing approximation for Directed Steiner Tree.
//!
//! The algorithm guesses a small set `S` of vertices of an optimal tree (a
//! φ-core), buys a tree from the root to `S`, and then covers the terminals
//! greedily with subtrees of at most φ terminals rooted in `S`. Trying every
//! small `S` and keeping the cheapest assembled tree gives a `1 + ln φ`
//! approximation; with `φ = ⌈N^(1-γ)⌉` the number of guesses is
//! `n^O(N/φ)`.

mod approx;
mod audit;
mod bounded;
mod phi_core;

pub use approx::{
    assemble, dst_approx, phi_for, CoreCap, DstApproxOptions, DstApproxOutcome,
    DEFAULT_CANDIDATE_BUDGET,
};
pub use audit::{
    core_identity, decomposition_audit, CoreIdentity, DecompositionReport, AUDIT_TERMINAL_BUDGET,
};
pub use bounded::{
    greedy_bounded_cover, min_density_set, BoundedCoverView, CoverPiece, DensityPick,
    SubsetTreeOracle,
};
pub use phi_core::{closed_core, find_phi_core, CorePiece, PhiCore, WitnessViolation};

use thiserror::Error;

use crate::exact::ExactError;
use crate::instances::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DstError {
    #[error("invalid instance: {0}")]
    Invalid(ValidationReport),
    #[error("gamma must lie in [1/2, 1), got {0}")]
    BadGamma(String),
    #[error("phi must be at least 1")]
    BadPhi,
    #[error("no candidate root reaches an uncovered terminal")]
    NoCoverableTerminal,
    #[error("core vertex {0} is unreachable from the root")]
    UnreachableCoreVertex(usize),
    #[error("terminal {0} is not a leaf of the tree")]
    NonLeafTerminal(usize),
    #[error("the tree spans no terminal")]
    NoTerminals,
    #[error(transparent)]
    Exact(#[from] ExactError),
}
