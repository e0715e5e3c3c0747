use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{prepare_world, run_replicate, EngineError, ReplicateOutput, ReplicateSummary, RunConfig, World};

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutput {
    pub replicates: Vec<ReplicateOutput>,
    pub summary: BatchSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModeFractions {
    pub random_walk: f64,
    pub foraging: f64,
    pub thermoregulation: f64,
    pub escape: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IntakeStats {
    /// Mean daily intake (kg) over all completed replicate-days.
    pub mean_daily_kg: f64,
    pub sd_daily_kg: f64,
    pub mean_crop_share: f64,
    pub days: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BatchSummary {
    pub version: String,
    pub master_seed: u64,
    pub month: u32,
    pub days: u32,
    pub replicates: usize,
    pub deaths: usize,
    pub raiding_replicates: usize,
    pub raid_probability: f64,
    pub death_probability: f64,
    /// Share of raiding replicates with more than one raid episode.
    pub reentry_probability: f64,
    pub steep_tick_fraction: f64,
    pub plantation_interior_ticks: usize,
    pub plantation_interior_day_ticks: usize,
    pub mode_fractions: ModeFractions,
    pub intake: IntakeStats,
    pub per_replicate: Vec<ReplicateSummary>,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn summarise(config: &RunConfig, summaries: &[ReplicateSummary]) -> BatchSummary {
    let n = summaries.len();
    let deaths = summaries.iter().filter(|s| s.died).count();
    let raiders: Vec<_> = summaries.iter().filter(|s| s.raided).collect();
    let reentries = raiders.iter().filter(|s| s.raid_episodes.len() > 1).count();
    let ticks: usize = summaries.iter().map(|s| s.ticks).sum();
    let steep: usize = summaries.iter().map(|s| s.steep_ticks).sum();

    let mode_total: usize = summaries.iter().map(|s| s.mode_ticks.total()).sum();
    let mode_sum = |f: fn(&ReplicateSummary) -> usize| ratio(summaries.iter().map(f).sum(), mode_total);
    let mode_fractions = ModeFractions {
        random_walk: mode_sum(|s| s.mode_ticks.random_walk),
        foraging: mode_sum(|s| s.mode_ticks.foraging),
        thermoregulation: mode_sum(|s| s.mode_ticks.thermoregulation),
        escape: mode_sum(|s| s.mode_ticks.escape),
    };

    let days: Vec<_> = summaries.iter().flat_map(|s| s.daily.iter()).collect();
    let intake = if days.is_empty() {
        IntakeStats::default()
    } else {
        let k = days.len() as f64;
        let mean = days.iter().map(|d| d.intake).sum::<f64>() / k;
        let var = days.iter().map(|d| (d.intake - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
        let total: f64 = days.iter().map(|d| d.intake).sum();
        let crop: f64 = days.iter().map(|d| d.crop_intake).sum();
        IntakeStats {
            mean_daily_kg: mean,
            sd_daily_kg: var.sqrt(),
            mean_crop_share: if total > 0.0 { crop / total } else { 0.0 },
            days: days.len(),
        }
    };

    BatchSummary {
        version: crate::VERSION.to_string(),
        master_seed: config.run.master_seed,
        month: config.run.month,
        days: config.run.days,
        replicates: n,
        deaths,
        raiding_replicates: raiders.len(),
        raid_probability: ratio(raiders.len(), n),
        death_probability: ratio(deaths, n),
        reentry_probability: ratio(reentries, raiders.len()),
        steep_tick_fraction: ratio(steep, ticks),
        plantation_interior_ticks: summaries.iter().map(|s| s.plantation_interior_ticks).sum(),
        plantation_interior_day_ticks: summaries.iter().map(|s| s.plantation_interior_day_ticks).sum(),
        mode_fractions,
        intake,
        per_replicate: summaries.to_vec(),
    }
}

/// Runs every replicate of `config` against an already prepared world.
/// Output order and content do not depend on the thread count.
pub fn run_batch_in(config: &RunConfig, world: &World, threads: Option<usize>) -> Result<BatchOutput, EngineError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder.build().map_err(|e| EngineError::ThreadPool(e.to_string()))?;
    let results: Vec<Result<ReplicateOutput, EngineError>> = pool.install(|| {
        (0..config.run.replicates)
            .into_par_iter()
            .map(|i| run_replicate(config, world, i))
            .collect()
    });
    let mut replicates = Vec::with_capacity(results.len());
    for (index, r) in results.into_iter().enumerate() {
        replicates.push(r.map_err(|e| EngineError::Replicate {
            index,
            source: Box::new(e),
        })?);
    }
    let summaries: Vec<_> = replicates.iter().map(|r| r.summary.clone()).collect();
    let summary = summarise(config, &summaries);
    log::info!(
        "batch done: {} replicates, raid probability {:.3}",
        summary.replicates,
        summary.raid_probability
    );
    Ok(BatchOutput { replicates, summary })
}

pub fn run_batch(config: &RunConfig, threads: Option<usize>) -> Result<BatchOutput, EngineError> {
    let world = prepare_world(config)?;
    run_batch_in(config, &world, threads)
}
