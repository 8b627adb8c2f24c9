use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A truncated series did not reach the requested tolerance.
    #[error("series did not converge after {terms} terms (last term {last_term:e}, partial sum {partial:e})")]
    Convergence {
        terms: usize,
        last_term: f64,
        partial: f64,
    },

    /// Cancellation in an alternating series exceeded the tolerance.
    #[error("series lost accuracy: largest term {largest_term:e}, partial sum {partial:e}")]
    AccuracyLoss { largest_term: f64, partial: f64 },

    /// None of the evaluation regimes met the tolerance.
    #[error("no regime met tolerance: series {series:?}, asymptotic {asymptotic:?}")]
    Regimes {
        series: Option<f64>,
        asymptotic: Option<f64>,
    },

    #[error("quadrature did not converge: value {value:e}, error estimate {error:e}")]
    Quadrature { value: f64, error: f64 },

    #[error("factorization failed: pivot {pivot:e} at index {index} after jitter {jitter:e}")]
    Factorization { index: usize, pivot: f64, jitter: f64 },

    #[error("symmetric eigensolver did not converge")]
    Eigen,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
