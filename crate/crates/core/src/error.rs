use thiserror::Error;

/// Errors raised by the region computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("parameter {name} = {value} is outside [0, 1]")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("both channel vectors are zero")]
    BothZeroVectors,

    #[error("invalid covariance: {0}")]
    CovarianceInvalid(String),

    #[error("noise correlation |rho| = {0} is on or outside the unit circle")]
    RhoOnUnitCircle(f64),

    #[error("tightness rho is undefined: |h^H e1| = {0:e}")]
    DegeneratePivot(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid sweep configuration: {0}")]
    InvalidSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NotPositiveDefinite { .. } | Error::DegeneratePivot(_) | Error::NonFinite(_))
    }
}
