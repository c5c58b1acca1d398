use thiserror::Error;

pub type Result<T, E = TapError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TapError {
    #[error("feature id {feature} is outside 1..={n_features}")]
    FeatureOutOfRange { feature: usize, n_features: usize },

    #[error("exemplar index {index} is out of range for {n_exemplars} exemplars")]
    ExemplarOutOfRange { index: usize, n_exemplars: usize },

    /// The instance does not belong to the class a solver or transform requires.
    #[error("{operation}: {reason}")]
    Precondition {
        operation: &'static str,
        reason: String,
    },

    #[error("instance has {n_exemplars} exemplars, brute force is limited to {limit}")]
    TooLarge { n_exemplars: usize, limit: usize },

    #[error("no applicable solver for a component with {n_exemplars} exemplars")]
    NoApplicableSolver { n_exemplars: usize },

    #[error("invalid source: {0}")]
    InvalidSource(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("reduction metadata does not match: {0}")]
    MetaMismatch(String),

    #[error("greedy trace does not match instance: {0}")]
    TraceMismatch(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

impl TapError {
    pub(crate) fn precondition(operation: &'static str, reason: impl Into<String>) -> Self {
        TapError::Precondition {
            operation,
            reason: reason.into(),
        }
    }
}
