use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("frequency quadrature did not converge at t = {t}: change {change:e} exceeds tolerance {tolerance:e}")]
    QuadratureNonConvergence { t: f64, change: f64, tolerance: f64 },

    #[error("time {t} lies beyond the kernel table horizon {horizon}")]
    BeyondHorizon { t: f64, horizon: f64 },

    #[error("numerical integrity failure at t = {t}: {detail}")]
    NumericalIntegrity { t: f64, detail: String },

    #[error("unsupported in {mode} bath mode: {what}")]
    UnsupportedMode { mode: &'static str, what: &'static str },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
