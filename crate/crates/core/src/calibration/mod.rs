//! Movement-model fitting from relocation tracks and inverse calibration of
//! the simulation against movement statistics.

mod abm;
mod families;
mod hmm;
mod nsga2;
mod objectives;
mod optim;
mod report;
mod slope;
mod special;
mod track;

pub use abm::{apply_parameters, calibrate_abm, simulated_objectives, AbmBounds, ABM_VARIABLES};
pub use families::{StepDist, StepFamily, TurnDist, TurnFamily};
pub use hmm::{
    em, fit_all_families, fit_hmm, log_likelihood, path_log_likelihood, viterbi, HmmFit, HmmOptions, HmmParams,
    MIN_OBSERVATIONS,
};
pub use nsga2::{crowding_distance, dominates, fast_nondominated_sort, nsga2, Individual, NsgaConfig, ParetoFront};
pub use objectives::{
    movement_objectives, movement_objectives_from_days, track_objectives, Estimate, MovementObjectives,
    BOOTSTRAP_RESAMPLES, CONFIDENCE,
};
pub use report::{fit_report, AicRow, FitReport, StateSummary};
pub use slope::{slope_sweep, tune_slope_tolerance, SlopeReport, SlopeRow, STEEP_FRACTION_BOUND};
pub use special::{bessel_ratio, inverse_bessel_ratio, ln_bessel_i0};
pub use track::{
    extract_steps, extract_steps_with, read_track_csv, Fix, RelocationTrack, StepSeries, MIN_STEP_KM,
    NOMINAL_INTERVAL_S,
};

use thiserror::Error;

use crate::analytics::AnalyticsError;
use crate::engine::EngineError;

#[derive(Debug, Error)]
pub enum CalibrationError {
    #[error("need at least 3 fixes, got {0}")]
    TooFewFixes(usize),
    #[error("timestamps must increase strictly (fix {index})")]
    NotIncreasing { index: usize },
    #[error("need at least 50 observations, got {0}")]
    TooShort(usize),
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("csv error on {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("evaluation failed at {vector:?}: {message}")]
    Evaluation { vector: Vec<f64>, message: String },
    #[error("invalid calibration settings: {0}")]
    InvalidConfig(String),
    #[error("no tolerance keeps steep traversal within bound ({0})")]
    NoFeasibleTolerance(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
}

impl CalibrationError {
    pub(crate) fn csv(path: &std::path::Path, source: csv::Error) -> Self {
        CalibrationError::Csv {
            path: path.display().to_string(),
            source,
        }
    }
}
