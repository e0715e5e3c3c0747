//! Home-range metrics, displacement, conflict clustering, raid statistics
//! and replicate-count convergence diagnostics.

mod convergence;
mod dbscan;
mod displacement;
mod hull;
mod kde;
mod raids;

pub use convergence::{
    convergence_cv, convergence_kl, kl_divergence, prefix_occupancy, running_cv, ConvergenceReport, Threshold,
    DEFAULT_EPSILONS, KL_SMOOTHING,
};
pub use dbscan::{cluster_count, dbscan};
pub use displacement::{day_displacement, displacement_stats, DailyDisplacement};
pub use hull::{convex_hull, mcp_area, polygon_area};
pub use kde::{kde_area, kde_grid, kde_layout, level_area, silverman_bandwidth, LevelArea};
pub use raids::{raid_stats, Histogram, RaidStats, DRY_MONTHS, INTAKE_BIN_KG};

use thiserror::Error;

use crate::terrain::{GridHeader, RasterGrid};

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("empty batch")]
    EmptyBatch,
}

/// Fraction of points falling in each cell of `header`; points outside are
/// ignored.
pub fn occupancy_grid(points: &[(f64, f64)], header: &GridHeader) -> RasterGrid {
    let mut grid = RasterGrid::filled(header.clone(), 0.0);
    let mut inside = 0usize;
    for p in points {
        if let Some(i) = header.index_of(p.0, p.1) {
            grid.values[i] += 1.0;
            inside += 1;
        }
    }
    if inside > 0 {
        grid.values.iter_mut().for_each(|v| *v /= inside as f64);
    }
    grid
}
