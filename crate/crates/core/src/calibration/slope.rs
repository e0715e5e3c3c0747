use serde::{Deserialize, Serialize};

use super::CalibrationError;
use crate::engine::{prepare_world, run_batch_in, RunConfig};

/// Largest admissible share of ticks on cells steeper than the slope limit.
pub const STEEP_FRACTION_BOUND: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeRow {
    pub tolerance: f64,
    pub steep_fraction: f64,
    pub ticks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub bound: f64,
    pub rows: Vec<SlopeRow>,
    /// Largest tolerance meeting the bound.
    pub selected: f64,
}

/// Steep-tick fraction of a batch for each tolerance, in the given order.
pub fn slope_sweep(
    config: &RunConfig,
    tolerances: &[f64],
    threads: Option<usize>,
) -> Result<Vec<SlopeRow>, CalibrationError> {
    let world = prepare_world(config)?;
    tolerances
        .iter()
        .map(|t| {
            let mut c = config.clone();
            c.agent.tolerance = *t;
            let batch = run_batch_in(&c, &world, threads)?;
            Ok(SlopeRow {
                tolerance: *t,
                steep_fraction: batch.summary.steep_tick_fraction,
                ticks: batch.summary.per_replicate.iter().map(|r| r.ticks).sum(),
            })
        })
        .collect()
}

/// Picks the least restrictive tolerance that keeps steep traversal within
/// the bound.
pub fn tune_slope_tolerance(
    config: &RunConfig,
    tolerances: &[f64],
    threads: Option<usize>,
) -> Result<SlopeReport, CalibrationError> {
    if tolerances.is_empty() {
        return Err(CalibrationError::InvalidConfig("no candidate tolerances".into()));
    }
    let rows = slope_sweep(config, tolerances, threads)?;
    let selected = rows
        .iter()
        .filter(|r| r.steep_fraction <= STEEP_FRACTION_BOUND)
        .map(|r| r.tolerance)
        .fold(None, |best: Option<f64>, t| Some(best.map_or(t, |b| b.max(t))));
    match selected {
        Some(selected) => Ok(SlopeReport {
            bound: STEEP_FRACTION_BOUND,
            rows,
            selected,
        }),
        None => Err(CalibrationError::NoFeasibleTolerance(
            rows.iter()
                .map(|r| format!("{}: {:.4}", r.tolerance, r.steep_fraction))
                .collect::<Vec<_>>()
                .join(", "),
        )),
    }
}
