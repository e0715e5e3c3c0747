//! Agent-based simulation of a solitary bull Asian elephant moving through a
//! forest-plantation landscape, raiding crops and managing its food and
//! thermoregulation budget.
//!
//! The crate is organised by concern:
//!
//! - [`terrain`]: static raster layers (elevation, slope, land use, proximity maps).
//! - [`environment`]: per-scenario food, home-garden plots, temperature and human disturbance.
//! - [`agent`]: the elephant's state, movement sampling, behavioural modes and physiology.
//! - [`engine`]: the 5-minute tick scheduler and the parallel, deterministic batch runner.
//! - [`calibration`]: step/turn extraction, two-state HMM fitting, NSGA-II and slope tuning.
//! - [`analytics`]: home-range metrics, clustering, raid statistics and convergence diagnostics.

// NaN-rejecting `!(x > 0.0)` checks are intentional.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod agent;
pub mod analytics;
pub mod calibration;
pub mod engine;
pub mod environment;
pub mod terrain;

/// Five-minute ticks in one day.
pub const TICKS_PER_DAY: usize = 288;
/// Ticks in one hour.
pub const TICKS_PER_HOUR: usize = 12;
/// Minutes represented by one tick.
pub const MINUTES_PER_TICK: u32 = 5;
/// Build identifier recorded in batch summaries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
