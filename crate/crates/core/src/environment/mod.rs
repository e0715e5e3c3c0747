//! Dynamic landscape state: food, home-garden plots, hourly temperature and
//! the human-disturbance schedule, plus a synthetic landscape generator.

mod agri;
mod disturbance;
mod food;
mod synthetic;
mod temperature;

pub use agri::{assign_agri_plots, AgriCategory, AgriShares};
pub use disturbance::{disturbance_at, DisturbanceSchedule};
pub use food::{init_food, FoodGrid, FoodScenario, ScenarioConfig};
pub use synthetic::{generate_synthetic_landscape, SyntheticLandscape, SyntheticSpec};
pub use temperature::{
    hourly_field, temperature_at, HourlyTemperature, TemperatureField, TemperatureModel, DEFAULT_MONTHLY_TMAX,
    DEFAULT_MONTHLY_TMIN,
};

use thiserror::Error;

use crate::terrain::TerrainError;

#[derive(Debug, Error)]
pub enum EnvironmentError {
    #[error("category shares sum to {0}, expected 1")]
    SharesSum(f64),
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("month {0} outside 1..=12")]
    Month(u32),
    #[error("hour {0} outside 0..=23")]
    Hour(u32),
    #[error("invalid temperature model: {0}")]
    Temperature(String),
    #[error("invalid synthetic landscape: {0}")]
    Synthetic(String),
    #[error(transparent)]
    Terrain(#[from] TerrainError),
}
