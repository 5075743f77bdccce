use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violates a mathematical precondition (ordering of payoffs,
    /// non-finite angle, probability out of range).
    #[error("domain error: {0}")]
    Domain(String),

    /// A run was configured in a way that cannot produce a result.
    #[error("configuration error: {0}")]
    Config(String),

    /// An integrand produced a non-finite value.
    #[error(
        "numeric error: integrand is not finite ({value}) at theta={theta}, phi={phi}, psi={psi}"
    )]
    NonFinite {
        value: f64,
        theta: f64,
        phi: f64,
        psi: f64,
    },

    /// Malformed command-line input.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}
