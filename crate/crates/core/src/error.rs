use thiserror::Error;

/// Errors raised by the multiset machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set must be non-empty (m = 0)")]
    EmptyGroundSet,

    #[error("rank {rank} out of range for a universe of size {size}")]
    RankOutOfRange { rank: usize, size: usize },

    #[error("cardinality mismatch: expected {expected}, found {found}")]
    CardinalityMismatch { expected: usize, found: usize },

    #[error("ground-set mismatch: [{left}] vs [{right}]")]
    GroundSetMismatch { left: usize, right: usize },

    #[error("universe mismatch: (m={}, k={}) vs (m={}, k={})", .left.0, .left.1, .right.0, .right.1)]
    UniverseMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("element {element} is outside the ground set [{bound}]")]
    ElementOutOfRange { element: usize, bound: usize },

    #[error("rectangle M({m},{l}) is too narrow for multiplicity {needed}")]
    RectangleTooNarrow { m: usize, l: usize, needed: usize },

    #[error("cell set is not downward closed in row {row}")]
    NotDownwardClosed { row: usize },

    #[error("kernel must contain M(m,1); row {row} is empty")]
    KernelMissingBaseRow { row: usize },

    #[error("shift rows must differ (i = j = {0})")]
    SameRow(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("postcondition failed: {0}")]
    Postcondition(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
