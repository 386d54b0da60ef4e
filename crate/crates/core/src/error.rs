use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A user-supplied objective or update returned NaN or an infinity.
    #[error("non-finite evaluation at {at}: {context}")]
    NonFinite { at: f64, context: String },

    /// The inner maximization of an energetic term has no finite optimum.
    #[error("divergent energetic term: {0}")]
    DivergentEnergetic(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
