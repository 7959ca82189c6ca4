use thiserror::Error;

/// Errors raised by the numeric core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MfcError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("sample at t={t} does not come after the previous sample at t={last}")]
    Ordering { t: f64, last: f64 },

    #[error("sample at t={t} is not one period ({period}) after t={last}")]
    Spacing { t: f64, last: f64, period: f64 },

    #[error("estimator not ready: {have} of {need} samples")]
    NotReady { have: usize, need: usize },

    #[error("window too short: tau={tau} must be at least twice the period {period}")]
    WindowTooShort { tau: f64, period: f64 },

    #[error("transfer function is not strictly proper (numerator degree {num}, denominator degree {den})")]
    Improper { num: usize, den: usize },

    #[error("{what} diverged at t={t}")]
    Divergence { what: &'static str, t: f64 },

    #[error("time {t} outside the profile horizon [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = MfcError> = core::result::Result<T, E>;
