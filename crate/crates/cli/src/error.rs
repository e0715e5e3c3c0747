use elephant_abm::analytics::AnalyticsError;
use elephant_abm::calibration::CalibrationError;
use elephant_abm::engine::EngineError;
use elephant_abm::terrain::TerrainError;
use thiserror::Error;

/// Failures grouped by the exit status they map to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    pub fn io(context: impl std::fmt::Display, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }
}

impl From<TerrainError> for CliError {
    fn from(e: TerrainError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        let msg = e.to_string();
        match e {
            EngineError::Config { .. } | EngineError::Environment(_) | EngineError::Agent(_) => CliError::Config(msg),
            EngineError::Io { .. } | EngineError::Csv { .. } | EngineError::Json { .. } | EngineError::Terrain(_) => {
                CliError::Io(msg)
            }
            EngineError::Replicate { source, .. } => match CliError::from(*source) {
                CliError::Config(_) => CliError::Config(msg),
                CliError::Io(_) => CliError::Io(msg),
                CliError::Numerical(_) => CliError::Numerical(msg),
            },
            EngineError::ThreadPool(_) => CliError::Numerical(msg),
        }
    }
}

impl From<CalibrationError> for CliError {
    fn from(e: CalibrationError) -> Self {
        let msg = e.to_string();
        match e {
            CalibrationError::Engine(inner) => inner.into(),
            CalibrationError::InvalidConfig(_) => CliError::Config(msg),
            CalibrationError::TooFewFixes(_)
            | CalibrationError::NotIncreasing { .. }
            | CalibrationError::Parse { .. }
            | CalibrationError::Csv { .. } => CliError::Io(msg),
            _ => CliError::Numerical(msg),
        }
    }
}

impl From<AnalyticsError> for CliError {
    fn from(e: AnalyticsError) -> Self {
        CliError::Numerical(e.to_string())
    }
}
