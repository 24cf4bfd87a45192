use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver and its supporting modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("objective space must have at least 2 dimensions, got {0}")]
    TooFewObjectives(usize),

    #[error("cannot bisect a box with zero diameter (box {0})")]
    DegenerateBox(u64),

    #[error("invalid box: lower bound {lower} exceeds upper bound {upper} in dimension {dim}")]
    InvalidBox { dim: usize, lower: f64, upper: f64 },

    #[error("cone parameter must lie in [0, 1), got {0}")]
    InvalidEps(f64),

    #[error("point lies outside the problem domain in dimension {dim} ({value} not in [{lower}, {upper}])")]
    OutsideDomain {
        dim: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("non-finite objective value f{index} = {value} at x = {x:?}")]
    NonFiniteObjective { index: usize, value: f64, x: Vec<f64> },

    #[error("degenerate objective range for f{index}: ideal {ideal} is not below nadir {nadir}")]
    DegenerateRange { index: usize, ideal: f64, nadir: f64 },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("invalid parameter for problem `{problem}`: {reason}")]
    InvalidParameter { problem: String, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty point set passed to a Hausdorff distance")]
    EmptySet,

    #[error("grid oracle supports at most 3 decision variables, problem has {0}")]
    OracleTooLarge(usize),

    #[error("live box count {count} exceeds the configured cap of {cap}")]
    BoxLimit { count: usize, cap: usize },

    #[error("failed to parse expression `{expr}`: {reason}")]
    Expression { expr: String, reason: String },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
