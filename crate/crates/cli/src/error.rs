use std::io;
use std::path::PathBuf;

use prodset_core::auxgraph::GraphError;
use prodset_core::coverlemma::CoverError;
use prodset_core::extremal::ExtremalError;
use prodset_core::polyseq::PolyError;
use prodset_core::productset::ProductError;
use prodset_core::sequences::SequenceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("desk-scale limit: {0}")]
    Guard(String),
    #[error("property violated: {0}")]
    Violation(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad input, 3 for desk-scale guards, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Violation(_) | CliError::Read { .. } | CliError::Write { .. } | CliError::Json(_) => 1,
        }
    }
}

impl From<ExtremalError> for CliError {
    fn from(e: ExtremalError) -> Self {
        match e {
            ExtremalError::SearchSpace { .. } => CliError::Guard(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::FactorBudget { .. }
            | PolyError::ShiftSearch { .. }
            | PolyError::PrimeTooLarge { .. } => CliError::Guard(e.to_string()),
            PolyError::NoAdmissibleResidue { .. } => CliError::Violation(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_error!(ProductError, SequenceError, GraphError, CoverError);
