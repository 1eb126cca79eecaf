use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("measure is not normalizable (quadrature mass {mass})")]
    NonNormalizable { mass: f64 },
    #[error("restriction has mass {mass} < 1e-12")]
    EmptyRestriction { mass: f64 },
    #[error("measure is not flagged log-concave")]
    NotLogConcave,
    #[error("spectral estimates disagree: fine {fine}, coarse {coarse}")]
    NonConverged { fine: f64, coarse: f64 },
    #[error("measure puts mass {mass} where the reference vanishes")]
    NotAbsolutelyContinuous { mass: f64 },
    #[error("common-grid resampling changed a mass by {drift}")]
    GridMismatch { drift: f64 },
    #[error("transport solver failed: {0}")]
    LpFailure(String),
    #[error("no witness with total variation >= {threshold} for T = {time}")]
    WitnessNotFound { time: f64, threshold: f64 },
    #[error("unknown formula `{0}`")]
    UnknownFormula(String),
    #[error("formula `{formula}` needs input `{input}`")]
    MissingInput { formula: String, input: String },
    #[error("no catalog formula applies")]
    NoApplicableFormula,
    #[error("certificate `{0}` is inert: preconditions not met")]
    InertCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
