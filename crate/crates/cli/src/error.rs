use std::fmt;

use dstcover::dst_core::DstError;
use dstcover::exact::ExactError;
use dstcover::formats::ParseError;
use dstcover::generate::GenerateError;
use dstcover::greedy::GreedyError;
use dstcover::instances::ValidationReport;
use dstcover::reductions::ReductionError;

/// A failure that ends the run before a report is produced.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Validation(String),
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "error: {m}"),
            CliError::Validation(m) => write!(f, "validation failure: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Validation(format!("parse error at {e}"))
    }
}

impl From<ValidationReport> for CliError {
    fn from(r: ValidationReport) -> Self {
        CliError::Validation(r.to_string())
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<DstError> for CliError {
    fn from(e: DstError) -> Self {
        match e {
            DstError::Exact(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<GreedyError> for CliError {
    fn from(e: GreedyError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<GenerateError> for CliError {
    fn from(e: GenerateError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            ReductionError::Exact(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
