use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A domain invariant (Hermitian symmetry, normalization, ...) does not hold.
    #[error("invariant `{invariant}` violated: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },

    /// Exact enumeration would exceed the configured work budget. No
    /// approximation is ever returned in its place.
    #[error("work budget exceeded: about {required} operations needed, budget is {budget}")]
    Budget { required: u128, budget: u128 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            invariant,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
