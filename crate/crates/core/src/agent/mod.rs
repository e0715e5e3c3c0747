//! The bull elephant: movement sampling, behavioural modes, target choice,
//! feeding, damage and physiology.

mod directions;
mod elephant;
mod memory;
mod movement;
mod params;
mod physiology;

pub use directions::{Direction, DirectionCosts, DirectionSet};
pub use elephant::{
    cells_within, DamageKind, DayReport, ElephantAgent, Mode, StepOutcome, Surroundings, Target, TargetKind,
    TargetRequest,
};
pub use memory::MemoryMatrix;
pub use movement::{bearing, displacement, wrap_angle, StepSampler, VonMises};
pub use params::{gamma_from_moments, AgentParams, MovementDistributions, SwitchOrder};
pub use physiology::{
    body_weight, daily_dry_matter_intake, food_increment, thermoregulation_increment, thermoregulation_probability,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("invalid agent parameter: {0}")]
    Param(String),
    #[error("agent position ({x}, {y}) is outside the landscape")]
    OutsideDomain { x: f64, y: f64 },
}
