use thiserror::Error;

/// Errors raised by the laboratory's operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// Two values built over different primes were combined.
    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: u32, right: u32 },

    /// A vector or atom touches a coordinate at or beyond the working horizon.
    #[error("coordinate {index} is outside horizon {horizon}")]
    HorizonExceeded { index: usize, horizon: usize },

    /// An enumeration or construction would exceed its configured cap.
    #[error("{what}: size {needed} exceeds cap {cap}")]
    Resource {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    /// A computed quantity contradicted a structural fact the algorithm relies on.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    /// The lookahead window ended before a stream stabilized.
    #[error(
        "window of {window} exhausted while selecting checkpoint {checkpoint}: {reason}"
    )]
    WindowExhausted {
        checkpoint: usize,
        window: usize,
        coordinate: Option<usize>,
        reason: String,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
