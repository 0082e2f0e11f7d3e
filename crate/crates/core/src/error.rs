use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is not a probability in [0, 1]")]
    NotAProbability { name: &'static str, value: f64 },

    #[error("invalid population profile: {0}")]
    InvalidProfile(String),

    #[error("malformed signal (alpha = {alpha}, beta = {beta}): {reason}")]
    MalformedSignal {
        alpha: f64,
        beta: f64,
        reason: &'static str,
    },

    #[error("contradictory evidence: prior {prior} cannot be updated by likelihood ratio {ratio}")]
    ContradictoryEvidence { prior: f64, ratio: f64 },

    #[error("{function} is undefined at {value}: {reason}")]
    OutsideDomain {
        function: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("profile is not manipulable; bias direction is undefined")]
    NotManipulable,

    #[error("invalid multi-realization signal: {0}")]
    InvalidMultiSignal(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("accuracy density integrates to {integral}, expected 1")]
    UnnormalizedDensity { integral: f64 },

    #[error("invalid accuracy density: {0}")]
    InvalidDensity(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("csv output failed: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::NotAProbability { name, value })
    }
}
