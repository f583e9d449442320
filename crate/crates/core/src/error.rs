use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("level {level} outside supported range 0..={max}")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("{what} cannot be used with drive frequency {omega} (natural frequency {omega0})")]
    CaseMismatch {
        what: &'static str,
        omega: f64,
        omega0: f64,
    },

    #[error("non-resonant formulas require omega != omega0")]
    ResonantDivision,

    #[error("state has {got} coefficients, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coefficient after step at tau = {tau}")]
    NonFinite { tau: f64 },

    #[error(
        "norm drift {drift:.3e} exceeds {limit:.1e} at tau = {tau:.6}; reduce the step (current dtau = {dtau:.3e})"
    )]
    NormDrift {
        drift: f64,
        limit: f64,
        tau: f64,
        dtau: f64,
    },

    #[error("time series needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("time grid is not uniform")]
    NonUniformGrid,

    #[error("series grids differ")]
    GridMismatch,

    #[error("invalid integration setup: {0}")]
    InvalidSetup(String),
}
