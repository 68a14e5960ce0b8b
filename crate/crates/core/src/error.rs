use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or argument lies outside the domain of the model.
    #[error("{name} = {value} is out of domain: {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// A single observation in a series is unusable.
    #[error("row {row}: {reason}")]
    InvalidObservation { row: usize, reason: String },

    /// The series as a whole cannot identify the model.
    #[error("degenerate series: {0}")]
    Degenerate(String),

    /// The requested operation does not apply to this model kind.
    #[error("model mismatch: expected {expected}, found {found}")]
    ModelMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("no convergence after {iterations} iterations (objective {objective:e}, damping {damping:e})")]
    NoConvergence {
        iterations: usize,
        objective: f64,
        damping: f64,
    },

    /// The half-share point could not be bracketed.
    #[error("half-life unreachable: {0}")]
    Unreachable(String),
}

pub(crate) fn ensure(
    ok: bool,
    name: &'static str,
    value: f64,
    requirement: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            requirement,
        })
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    ensure(
        value.is_finite() && value > 0.0,
        name,
        value,
        "must be finite and > 0",
    )?;
    Ok(value)
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    ensure(
        value.is_finite() && value >= 0.0,
        name,
        value,
        "must be finite and >= 0",
    )?;
    Ok(value)
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    ensure(value.is_finite(), name, value, "must be finite")?;
    Ok(value)
}
