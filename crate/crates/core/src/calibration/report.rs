use serde::{Deserialize, Serialize};

use super::{fit_all_families, viterbi, CalibrationError, HmmFit, HmmOptions, StepFamily, StepSeries, TurnFamily};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AicRow {
    pub step_family: StepFamily,
    pub turn_family: TurnFamily,
    pub log_likelihood: f64,
    pub n_params: usize,
    pub aic: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSummary {
    pub step_mean_km: f64,
    pub step_sd_km: f64,
    pub turn_mean: f64,
    pub turn_concentration: f64,
}

/// Family comparison and the winning model in the layout of a movement
/// parameter table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub observations: usize,
    pub segments: usize,
    pub aic_table: Vec<AicRow>,
    pub best: HmmFit,
    pub transition: [[f64; 2]; 2],
    pub encamped: StateSummary,
    pub exploratory: StateSummary,
    /// Share of Viterbi-decoded exploratory steps.
    pub exploratory_fraction: f64,
    pub stationary_exploratory: f64,
}

pub fn fit_report(series: &[StepSeries], opts: &HmmOptions) -> Result<FitReport, CalibrationError> {
    let fits = fit_all_families(series, opts)?;
    let best = fits[0].clone();
    let p = best.params;
    let state = |s: usize| StateSummary {
        step_mean_km: p.steps[s].mean(),
        step_sd_km: p.steps[s].sd(),
        turn_mean: p.turns[s].mean(),
        turn_concentration: p.turns[s].concentration(),
    };
    let decoded: Vec<usize> = series.iter().flat_map(|s| viterbi(&p, s)).collect();
    Ok(FitReport {
        observations: decoded.len(),
        segments: series.len(),
        aic_table: fits
            .iter()
            .map(|f| AicRow {
                step_family: f.step_family,
                turn_family: f.turn_family,
                log_likelihood: f.log_likelihood,
                n_params: f.n_params,
                aic: f.aic,
                converged: f.converged,
            })
            .collect(),
        transition: p.transition,
        encamped: state(0),
        exploratory: state(1),
        exploratory_fraction: decoded.iter().filter(|s| **s == 1).count() as f64 / decoded.len() as f64,
        stationary_exploratory: p.stationary()[1],
        best,
    })
}
