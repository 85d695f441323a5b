use thiserror::Error;

/// Errors raised by the simulator.
///
/// Everything except [`Error::ProtocolViolation`] and [`Error::Invariant`] is
/// a rejected input; those two indicate a bug in wiring or numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("register shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{kind} slot {slot} out of range (register has {len})")]
    SlotOutOfRange {
        kind: &'static str,
        slot: usize,
        len: usize,
    },

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("singular cavity parameters: {0}")]
    Singular(String),

    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("error model not covered by the procedure: {0}")]
    UndefinedModel(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors that signal a simulator bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::ProtocolViolation(_) | Error::Invariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
