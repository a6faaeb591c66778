use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Each variant maps onto one CLI exit class (see [`Error::class`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("no phase transition for {0}")]
    NoTransition(String),
    #[error("mode cutoff too small: tail bound {tail:.3e} exceeds {allowed:.3e}")]
    CutoffTooSmall { tail: f64, allowed: f64 },
    #[error("failed to converge: {0}")]
    Convergence(String),
    #[error("singular Fisher matrix: {0}")]
    SingularFisher(String),
    #[error("degenerate direction: rotation undefined")]
    DegenerateDirection,
    #[error("sample moment outside model range: {0}")]
    OutOfModelRange(String),
    #[error("negative variance {0:.6e}")]
    NegativeVariance(f64),
    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),
    #[error("batch format: {0}")]
    Format(String),
}

/// Coarse error classes used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    ModelRange,
    Convergence,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Domain(_)
            | Error::UnsupportedScenario(_)
            | Error::Format(_)
            | Error::DegenerateDirection => ErrorClass::Validation,
            Error::NoSolution(_)
            | Error::NoTransition(_)
            | Error::CutoffTooSmall { .. }
            | Error::SingularFisher(_)
            | Error::OutOfModelRange(_)
            | Error::NegativeVariance(_) => ErrorClass::ModelRange,
            Error::Convergence(_) => ErrorClass::Convergence,
        }
    }

    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DOMAIN",
            Error::NoSolution(_) => "NO_SOLUTION",
            Error::NoTransition(_) => "NO_TRANSITION",
            Error::CutoffTooSmall { .. } => "CUTOFF_TOO_SMALL",
            Error::Convergence(_) => "CONVERGENCE",
            Error::SingularFisher(_) => "SINGULAR_FISHER",
            Error::DegenerateDirection => "DEGENERATE_DIRECTION",
            Error::OutOfModelRange(_) => "OUT_OF_MODEL_RANGE",
            Error::NegativeVariance(_) => "NEGATIVE_VARIANCE",
            Error::UnsupportedScenario(_) => "UNSUPPORTED_SCENARIO",
            Error::Format(_) => "FORMAT",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
