use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::engine::ReplicateSummary;

/// February to May.
pub const DRY_MONTHS: [u32; 4] = [2, 3, 4, 5];
pub const INTAKE_BIN_KG: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    /// `counts[i]` covers `[i * bin_width, (i + 1) * bin_width)`.
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn from_values(values: impl IntoIterator<Item = f64>, bin_width: f64) -> Self {
        let mut counts = Vec::new();
        for v in values {
            let bin = (v.max(0.0) / bin_width).floor() as usize;
            if counts.len() <= bin {
                counts.resize(bin + 1, 0);
            }
            counts[bin] += 1;
        }
        Self { bin_width, counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaidStats {
    pub replicates: usize,
    pub raiding_replicates: usize,
    pub raid_probability: f64,
    pub reentry_probability: f64,
    pub episodes: usize,
    /// Episodes that began while the agent had at least one food-deprived day.
    pub deprived_raid_fraction: f64,
    pub replicate_days: usize,
    /// Share of days whose forest-only intake fell below the requirement.
    pub starvation_probability: f64,
    pub ddmi_kg: f64,
    pub dry_intake: Histogram,
    pub wet_intake: Histogram,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn raid_stats(batch: &[ReplicateSummary], ddmi_kg: f64) -> Result<RaidStats, AnalyticsError> {
    if batch.is_empty() {
        return Err(AnalyticsError::EmptyBatch);
    }
    let raiders: Vec<_> = batch.iter().filter(|r| r.raided).collect();
    let reentries = raiders.iter().filter(|r| r.raid_episodes.len() >= 2).count();
    let episodes: Vec<_> = batch.iter().flat_map(|r| r.raid_episodes.iter()).collect();
    let deprived = episodes.iter().filter(|e| e.deprived_days_at_onset > 0).count();
    let days: Vec<_> = batch.iter().flat_map(|r| r.daily.iter()).collect();
    let starving = days.iter().filter(|d| d.forest_intake < ddmi_kg).count();
    let dry = |m: u32| DRY_MONTHS.contains(&m);
    Ok(RaidStats {
        replicates: batch.len(),
        raiding_replicates: raiders.len(),
        raid_probability: ratio(raiders.len(), batch.len()),
        reentry_probability: ratio(reentries, raiders.len()),
        episodes: episodes.len(),
        deprived_raid_fraction: ratio(deprived, episodes.len()),
        replicate_days: days.len(),
        starvation_probability: ratio(starving, days.len()),
        ddmi_kg,
        dry_intake: Histogram::from_values(days.iter().filter(|d| dry(d.month)).map(|d| d.intake), INTAKE_BIN_KG),
        wet_intake: Histogram::from_values(days.iter().filter(|d| !dry(d.month)).map(|d| d.intake), INTAKE_BIN_KG),
    })
}
