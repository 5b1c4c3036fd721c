use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("channel output is non-physical: covariance {variance} < 1/2")]
    NonPhysicalChannel { variance: f64 },

    #[error("detection infeasible: {0}")]
    InfeasibleDetection(String),

    #[error("truncation too small: tail mass {tail:e} exceeds {tolerance:e}")]
    TailMass { tail: f64, tolerance: f64 },

    #[error("divergent quantity: {0}")]
    Divergence(String),

    #[error("SLD measurement is degenerate: noise slope vanishes, frame offset -2A/lambda undefined (use the homodyne scheme, which saturates the QFI here)")]
    DegeneratePovm,

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
