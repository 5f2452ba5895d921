use std::fmt;

use hfd_core::arith::ArithError;
use hfd_core::cfk::CfkError;
use hfd_core::knots::KnotError;
use hfd_core::lens::LensError;
use hfd_core::obstruct::ObstructError;
use hfd_core::plumbing::PlumbingError;
use hfd_core::table::TableError;

#[derive(Debug)]
pub enum CliError {
    /// A check ran to completion and failed.
    Failed(String),
    Invalid(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Failed(m) => write!(f, "check failed: {m}"),
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Precondition(m) => write!(f, "precondition failed: {m}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<ArithError> for CliError {
    fn from(e: ArithError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<TableError> for CliError {
    fn from(e: TableError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<PlumbingError> for CliError {
    fn from(e: PlumbingError) -> Self {
        use PlumbingError::*;
        match e {
            InvalidTree(_) | DimensionMismatch | NotSymmetric | NotATree => {
                CliError::Invalid(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<LensError> for CliError {
    fn from(e: LensError) -> Self {
        match e {
            LensError::InvalidLens { .. } => CliError::Invalid(e.to_string()),
            LensError::Plumbing(p) => p.into(),
            LensError::Table(t) => t.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<KnotError> for CliError {
    fn from(e: KnotError) -> Self {
        match e {
            KnotError::NotLSpaceForm(_) | KnotError::InvalidGaps(_) => {
                CliError::Precondition(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<CfkError> for CliError {
    fn from(e: CfkError) -> Self {
        use CfkError::*;
        match e {
            Parse(_)
            | UnknownGenerator(_)
            | DuplicateName(_)
            | NegativePower { .. }
            | InvalidComplex(_)
            | InvalidGaps(_) => CliError::Invalid(e.to_string()),
            ValueMismatch { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<ObstructError> for CliError {
    fn from(e: ObstructError) -> Self {
        match e {
            ObstructError::InvalidCable(_) => CliError::Invalid(e.to_string()),
            ObstructError::Lens(l) => l.into(),
            ObstructError::Table(t) => t.into(),
            ObstructError::Knot(k) => k.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}
