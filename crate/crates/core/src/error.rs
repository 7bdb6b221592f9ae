use thiserror::Error;

/// Errors raised by the library.
///
/// `Invariant` is reserved for failures of a mathematical property that the
/// library itself is supposed to guarantee (integrality, duality, Ising
/// equations, ...). Everything else is a problem with the caller's input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("lattice is not an isometry: {0}")]
    NotIsometry(String),
    #[error("group action does not preserve the form: {0}")]
    NotInvariant(String),
    #[error("structural failure: {0}")]
    Structural(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("internal defect: {0}")]
    Defect(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True when the error signals a broken library-level invariant rather
    /// than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::Invariant(_) | Error::Structural(_) | Error::Defect(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
