use pbcov_core::{AnalyticError, SimError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<AnalyticError> for CliError {
    fn from(e: AnalyticError) -> Self {
        match e {
            AnalyticError::Model(_)
            | AnalyticError::DegenerateLadder { .. }
            | AnalyticError::InvalidInput(_)
            | AnalyticError::NoPowerCoverage => CliError::Config(e.to_string()),
            AnalyticError::SpecFun(_)
            | AnalyticError::Inversion { .. }
            | AnalyticError::Inconsistent { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Analytic(a) => a.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<pbcov_core::ModelError> for CliError {
    fn from(e: pbcov_core::ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}
