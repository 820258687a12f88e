use thiserror::Error;

use crate::numeric::ComplexPoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },

    #[error("leading term of the zero polynomial is undefined")]
    ZeroPolynomial,

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("determinant requested for a non-square {rows}x{cols} matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("Leibniz expansion limited to size {max}, got {size}")]
    LeibnizTooLarge { size: usize, max: usize },

    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),

    #[error("multinomial sum mismatch: parts sum to {sum}, expected {n}")]
    MultinomialSumMismatch { n: u32, sum: u32 },

    #[error("size guard exceeded: m={m}, n={n} (limits m<={m_max}, n<={n_max})")]
    GuardExceeded {
        m: usize,
        n: u32,
        m_max: usize,
        n_max: u32,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid set partition: {0}")]
    InvalidPartition(String),

    #[error("coordinates of block {block} disagree beyond tolerance")]
    BlockMismatch { block: usize },

    #[error("point does not lie in the requested stratum")]
    StratumMismatch,

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("path needs at least two samples, got {0}")]
    PathTooShort(usize),

    #[error("target path does not start at the image of the start point (residual {residual:e})")]
    InitialPointMismatch { residual: f64 },

    #[error("Newton corrector failed after {iterations} iterations")]
    CorrectorDiverged {
        iterations: usize,
        last_good: ComplexPoint,
    },

    #[error("continuation step fell below {min_step:e} at segment {segment}")]
    StepUnderflow {
        segment: usize,
        min_step: f64,
        last_good: ComplexPoint,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numeric continuation machinery (as opposed
    /// to bad input or a failed identity).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::CorrectorDiverged { .. } | Error::StepUnderflow { .. }
        )
    }
}
