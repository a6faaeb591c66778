use qgf_core::error::ErrorClass;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qgf_core::Error),
    #[error("Bose gases need mu < 0, got {0:e} J")]
    MuDomain(f64),
    #[error("{0}")]
    Unit(String),
    #[error("{0}")]
    Argument(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::MuDomain(_) => "MU_DOMAIN",
            CliError::Unit(_) => "UNIT",
            CliError::Argument(_) => "ARGUMENT",
            CliError::Io(_) | CliError::Csv(_) => "IO",
        }
    }

    /// 2 validation, 3 model range, 4 convergence. I/O failures count as 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::Validation => 2,
                ErrorClass::ModelRange => 3,
                ErrorClass::Convergence => 4,
            },
            CliError::MuDomain(_) | CliError::Unit(_) | CliError::Argument(_) => 2,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }

    /// One-line JSON error record for stderr.
    pub fn record(&self) -> String {
        json!({ "error": self.code(), "exit": self.exit_code(), "message": self.to_string() }).to_string()
    }
}

pub fn argument<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Argument(msg.into()))
}
