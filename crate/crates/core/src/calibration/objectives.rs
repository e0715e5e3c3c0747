use chrono::Datelike;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CalibrationError, RelocationTrack};
use crate::analytics::{day_displacement, mcp_area};

type Point = (f64, f64);

pub const BOOTSTRAP_RESAMPLES: usize = 1000;
pub const CONFIDENCE: f64 = 0.95;

/// A mean with a percentile-bootstrap confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Estimate {
    pub fn halfwidth(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    /// Distance of `value` outside the interval centred on the mean.
    pub fn penalty(&self, value: f64) -> f64 {
        ((value - self.mean).abs() - self.halfwidth()).max(0.0)
    }
}

/// Monthly MCP (km²), mean diel displacement (km) and mean daily net
/// displacement (km).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MovementObjectives {
    pub mcp_km2: Estimate,
    pub diel_km: Estimate,
    pub net_km: Estimate,
    pub trajectories: usize,
    pub days: usize,
}

impl MovementObjectives {
    /// Hinge penalties of simulated statistics against these targets.
    pub fn penalties(&self, simulated: &MovementObjectives) -> [f64; 3] {
        [
            self.mcp_km2.penalty(simulated.mcp_km2.mean),
            self.diel_km.penalty(simulated.diel_km.mean),
            self.net_km.penalty(simulated.net_km.mean),
        ]
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn bootstrap(values: &[f64], rng: &mut ChaCha8Rng) -> Estimate {
    let m = mean(values);
    let mut means: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            let s: f64 = (0..values.len())
                .map(|_| values[rng.random_range(0..values.len())])
                .sum();
            s / values.len() as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - CONFIDENCE) / 2.0;
    let at = |p: f64| means[((means.len() - 1) as f64 * p).round() as usize];
    Estimate {
        mean: m,
        lower: at(tail),
        upper: at(1.0 - tail),
    }
}

/// Objectives from trajectories already split into days (metres).
pub fn movement_objectives_from_days(
    trajectories: &[Vec<Vec<Point>>],
    seed: u64,
) -> Result<MovementObjectives, CalibrationError> {
    let mcp: Vec<f64> = trajectories
        .iter()
        .filter(|t| !t.is_empty())
        .map(|t| mcp_area(&t.concat()))
        .collect();
    let days: Vec<(f64, f64)> = trajectories
        .iter()
        .flatten()
        .filter(|d| !d.is_empty())
        .map(|d| day_displacement(d))
        .collect();
    if mcp.is_empty() || days.is_empty() {
        return Err(CalibrationError::Degenerate("no trajectory data".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diel: Vec<f64> = days.iter().map(|d| d.0).collect();
    let net: Vec<f64> = days.iter().map(|d| d.1).collect();
    Ok(MovementObjectives {
        mcp_km2: bootstrap(&mcp, &mut rng),
        diel_km: bootstrap(&diel, &mut rng),
        net_km: bootstrap(&net, &mut rng),
        trajectories: mcp.len(),
        days: days.len(),
    })
}

/// Objectives from regularly sampled trajectories; days are consecutive
/// runs of `ticks_per_day` fixes, partial days dropped.
pub fn movement_objectives(
    trajectories: &[Vec<Point>],
    ticks_per_day: usize,
    seed: u64,
) -> Result<MovementObjectives, CalibrationError> {
    let split: Vec<Vec<Vec<Point>>> = trajectories
        .iter()
        .map(|t| t.chunks_exact(ticks_per_day).map(<[Point]>::to_vec).collect())
        .collect();
    movement_objectives_from_days(&split, seed)
}

/// Objectives from a relocation track grouped by calendar month and day.
pub fn track_objectives(track: &RelocationTrack, seed: u64) -> Result<MovementObjectives, CalibrationError> {
    let mut months: Vec<Vec<Vec<Point>>> = Vec::new();
    let mut last: Option<(i32, u32, u32)> = None;
    for f in track.fixes() {
        let key = (f.time.year(), f.time.month(), f.time.day());
        match last {
            Some(k) if k == key => {}
            Some(k) if (k.0, k.1) == (key.0, key.1) => months.last_mut().expect("open month").push(Vec::new()),
            _ => months.push(vec![Vec::new()]),
        }
        months
            .last_mut()
            .and_then(|m| m.last_mut())
            .expect("open day")
            .push((f.x, f.y));
        last = Some(key);
    }
    movement_objectives_from_days(&months, seed)
}
