use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested ordering is too close to the singular P-function limit.
    #[error("ordering s = {s} is singular for this channel; the largest admissible s is {s_max}")]
    SingularOrdering { s: f64, s_max: f64 },

    /// An iterative routine did not reach its tolerance.
    #[error("{what} did not converge (residual {residual:e})")]
    NonConvergence { what: &'static str, residual: f64 },

    /// The end points of a bracket do not straddle a sign change.
    #[error("invalid bracket [{lo}, {hi}]: no sign change between the end points")]
    InvalidBracket { lo: f64, hi: f64 },

    /// The Fock-space truncation cannot hold the state.
    #[error("Fock truncation too small: {0}")]
    Truncation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
