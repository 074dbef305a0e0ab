use thiserror::Error;

/// Errors produced by the motion-cue calculus, reconstruction and simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
    #[error("quaternion has zero norm")]
    ZeroQuaternion,
    #[error("vector has zero length")]
    ZeroVector,
    #[error("quaternion is not unit (norm {0})")]
    NotUnitQuaternion(f64),
    #[error("vector is not unit (norm {0})")]
    NotUnitVector(f64),
    #[error("bearing is at a pole (phi = {0}); e_theta is undefined")]
    PolarSingularity(f64),
    #[error("range {0} is at or below the minimum range")]
    RangeTooSmall(f64),
    #[error("ToR magnitude {0} is at or below the minimum magnitude")]
    ZeroMagnitude(f64),
    #[error("vector has an off-normal component of {0}; configuration is not planar")]
    NotPlanar(f64),
    #[error("index {index} out of range (valid {min}..={max})")]
    IndexOutOfRange { index: usize, min: usize, max: usize },
    #[error("sample {0} has zero relative velocity")]
    ZeroVelocitySample(usize),
    #[error("parameter {0} must be positive")]
    NonPositiveParameter(&'static str),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("need at least {needed} shared point ids, got {got}")]
    InsufficientCorrespondence { needed: usize, got: usize },
    #[error("invalid config field `{field}`: {message}")]
    ConfigInvalid { field: String, message: String },
    #[error("time {0} is outside the configured horizon")]
    TimeOutOfRange(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ConfigInvalid {
            field: field.into(),
            message: message.into(),
        }
    }
}
