use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("plasma dielectric function diverges at xi = 0; use the limiting forms")]
    DivergentStaticLimit,

    #[error("degenerate mode: xi and k both vanish")]
    DegenerateMode,

    #[error("too close to the surface plasmon pole (omega_plasmon = {omega_plasmon})")]
    PlasmonPole { omega_plasmon: f64 },

    #[error("lorentzian amplitude evaluated at its pole omega_s = {omega_s}")]
    LorentzianPole { omega_s: f64 },

    #[error("closed loop is unstable: rho = {rho} (must stay below 1)")]
    Instability { rho: f64 },

    #[error("integrand returned {value} at x = {x}")]
    NonFiniteIntegrand { x: f64, value: f64 },

    #[error("series did not converge within {terms} terms")]
    Divergent { terms: usize },

    #[error("{0} requires identical mirrors")]
    NonIdenticalMirrors(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field,
            reason: reason.into(),
        }
    }
}

/// Rejects NaN, infinities and values `<= 0`.
pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        Err(Error::invalid(field, format!("must be finite, got {value}")))
    } else if value <= 0.0 {
        Err(Error::invalid(field, format!("must be > 0, got {value}")))
    } else {
        Ok(value)
    }
}

pub(crate) fn require_non_negative(field: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        Err(Error::invalid(field, format!("must be finite, got {value}")))
    } else if value < 0.0 {
        Err(Error::invalid(field, format!("must be >= 0, got {value}")))
    } else {
        Ok(value)
    }
}
