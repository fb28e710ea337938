use thiserror::Error;

pub type Result<T> = std::result::Result<T, QError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    /// An argument violates a hypothesis or a type invariant.
    #[error("domain error: {0}")]
    Domain(String),

    /// A product or series hit `max_terms` before its tail bound was met.
    #[error("truncation exceeded after {terms} terms")]
    TruncationExceeded { terms: usize },

    /// A denominator is numerically zero.
    #[error("near-singular {what}: magnitude {magnitude:e}")]
    NearSingular { what: String, magnitude: f64 },

    #[error("series diverges: terms grew for {run} consecutive indices")]
    DivergentSeries { run: usize },
}

impl QError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QError::Domain(msg.into())
    }

    pub(crate) fn near_singular(what: impl Into<String>, magnitude: f64) -> Self {
        QError::NearSingular {
            what: what.into(),
            magnitude,
        }
    }
}
