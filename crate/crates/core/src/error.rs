use thiserror::Error;

/// Errors raised by constructors and operations of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("value {value} at ({row}, {col}) outside [{lo}, {hi}]")]
    ValueOutOfRange {
        row: usize,
        col: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("operands do not share the same steps and measures")]
    IncompatibleBasis,
    #[error("{what} is {got}, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("pattern node {0} has no assigned step")]
    IncompleteAssignment(usize),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graphon is not 0-1 valued (value {value} at ({row}, {col}))")]
    NotZeroOne { row: usize, col: usize, value: f64 },
    #[error("exclusion hypothesis fails: pattern density is {0}")]
    ExclusionFails(f64),
    #[error("family contains the empty set, no transversal exists")]
    NoTransversal,
    #[error("set family carries no ground-set weights")]
    MissingWeights,
    #[error("triangle inequality violated on ({0}, {1}, {2})")]
    TriangleViolation(usize, usize, usize),
    #[error("guaranteed bound violated: {0}")]
    BoundViolated(String),
    #[error("cannot realize as a blow-up: {0}")]
    NotRealizable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that report a violated mathematical hypothesis
    /// rather than malformed input.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::NotZeroOne { .. }
                | Error::ExclusionFails(_)
                | Error::BoundViolated(_)
                | Error::NotRealizable(_)
        )
    }

    pub fn is_size_limit(&self) -> bool {
        matches!(self, Error::SizeLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
