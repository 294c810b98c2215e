use std::fmt;

use thiserror::Error;

use crate::pdhg::StepTrace;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: expected {expected}, found {found}")]
    GridMismatch { expected: String, found: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite initial value {value} at grid point (i={i}, j={j})")]
    NonFiniteSample { i: usize, j: usize, value: f64 },

    #[error("indefinite preconditioner: symbol entry {index} is {value}")]
    IndefinitePreconditioner { index: usize, value: f64 },

    #[error("model blow-up in component {component} ({model})")]
    ModelBlowUp { model: &'static str, component: usize },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("unknown preset `{name}`; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("front vanished: no sign change along the ray")]
    FrontVanished,

    #[error("no sign crossing at probe ({x}, {y})")]
    NoSignCrossing { x: f64, y: f64 },

    #[error("singular A: zero eigenvalue at index {0}")]
    SingularOperator(usize),

    #[error("time step failed at t = {time} (h_t = {h_t}): {outcome} after {iterations} iterations")]
    StepFailed {
        time: f64,
        h_t: f64,
        outcome: Outcome,
        iterations: usize,
        trace: Box<StepTrace>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

/// How an inner PDHG solve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Converged,
    MaxIters,
    Diverged,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::Converged => "converged",
            Outcome::MaxIters => "max-iters",
            Outcome::Diverged => "diverged",
        };
        f.write_str(s)
    }
}
