//! The 5-minute scheduler, replicate seeding, batch fan-out and output files.

mod batch;
mod config;
mod output;
mod replicate;
mod seeding;

pub use batch::{run_batch, run_batch_in, summarise, BatchOutput, BatchSummary, IntakeStats, ModeFractions};
pub use config::{
    LandscapeConfig, MonthlyValue, RunConfig, RunSettings, ScenarioSpec, TemperatureConfig, TemperatureSeries,
};
pub use output::{
    read_events_csv, read_summary, read_trajectory_csv, write_batch, write_json, EventRow, TrajectoryRow,
};
pub use replicate::{
    prepare_world, raid_episodes, run_replicate, DailyIntake, Event, EventKind, ModeTicks, RaidEpisode,
    ReplicateOutput, ReplicateSummary, TickRecord, World, RAID_GAP_TICKS,
};
pub use seeding::{stream_seed, Stream};

use thiserror::Error;

use crate::agent::AgentError;
use crate::environment::EnvironmentError;
use crate::terrain::TerrainError;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("{field}: {message}")]
    Config { field: String, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Terrain(#[from] TerrainError),
    #[error(transparent)]
    Environment(#[from] EnvironmentError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error("replicate {index}: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<EngineError>,
    },
    #[error("csv error on {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("json error on {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl EngineError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        EngineError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        EngineError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
