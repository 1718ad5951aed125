use thiserror::Error;

/// Errors raised by the estimators and the experiment harness.
#[derive(Debug, Error)]
pub enum GsaError {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed or inconsistent arguments (sizes, counts, lengths).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Output variance is zero or numerically negligible, so variance ratios are undefined.
    #[error("degenerate model: output variance {variance:e} is negligible (mean {mean:e})")]
    DegenerateModel { variance: f64, mean: f64 },

    /// All observations identical; nearest-neighbour distances collapse to zero.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// A resampled statistic failed.
    #[error("statistic failed on resample {replicate}: {source}")]
    Resample {
        replicate: usize,
        #[source]
        source: Box<GsaError>,
    },
}

pub type Result<T, E = GsaError> = std::result::Result<T, E>;

pub(crate) fn argument(msg: impl Into<String>) -> GsaError {
    GsaError::Argument(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> GsaError {
    GsaError::Domain(msg.into())
}
