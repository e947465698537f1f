//! Error type shared across the library.
//!
//! Every fallible operation returns [`Error`]. Two variants deserve special
//! attention because callers branch on them:
//!
//! * [`Error::PrecisionExhausted`] — an interval refinement loop hit its bit
//!   budget before a floor (or a sign) could be certified. This is the *only*
//!   way numeric uncertainty surfaces: no operation ever returns an uncertified
//!   value.
//! * [`Error::InputExhausted`] — a single `absorb` was asked to consume from a
//!   finished quotient stream. The batch `run` drivers do not raise this; they
//!   stop and report the exhausted side in their result instead.

use thiserror::Error;

/// Which of the two operand streams of a bilinear computation is meant.
///
/// Möbius computations have a single stream and always use [`StreamSide::X`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamSide {
    /// The first (or only) operand stream.
    X,
    /// The second operand stream of a bilinear computation.
    Y,
}

impl std::fmt::Display for StreamSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StreamSide::X => write!(f, "x"),
            StreamSide::Y => write!(f, "y"),
        }
    }
}

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A refinement loop reached its precision budget with the queried
    /// property (floor, sign, …) still straddling a boundary.
    #[error("precision budget exhausted after {spent} of {budget} bits")]
    PrecisionExhausted {
        /// Bits of precision spent when the loop gave up.
        spent: u64,
        /// The budget that was in force.
        budget: u64,
    },

    /// An enclosure query needed a denominator that still contains zero.
    /// Callers refine the source and retry; it is not a terminal condition.
    #[error("enclosure indeterminate: denominator interval contains zero")]
    Indeterminate,

    /// A single-step absorb was asked to read past the end of a finite stream.
    #[error("input stream on side {side} is exhausted")]
    InputExhausted {
        /// The stream that ran dry.
        side: StreamSide,
    },

    /// A matrix or step had the wrong shape for the requested operation.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A constructor rejected its arguments (singular matrix, empty stream,
    /// malformed expansion, …).
    #[error("invalid argument: {0}")]
    Invalid(String),

    /// JSON (de)serialization failure, including schema violations.
    #[error("json: {0}")]
    Json(String),

    /// I/O failure while reading inputs or writing reports.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
