use serde::{Deserialize, Serialize};

use super::{movement_objectives, nsga2, CalibrationError, MovementObjectives, NsgaConfig, ParetoFront};
use crate::engine::{prepare_world, run_replicate, RunConfig, World};
use crate::TICKS_PER_DAY;

/// Search ranges for the four calibrated quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AbmBounds {
    pub forest_food_percent: (f64, f64),
    pub forest_max_food_value: (f64, f64),
    pub percent_memory: (f64, f64),
    pub radius_food_search: (f64, f64),
}

impl Default for AbmBounds {
    fn default() -> Self {
        Self {
            forest_food_percent: (0.01, 0.5),
            forest_max_food_value: (5.0, 100.0),
            percent_memory: (0.05, 1.0),
            radius_food_search: (250.0, 2000.0),
        }
    }
}

impl AbmBounds {
    pub fn as_vec(&self) -> Vec<(f64, f64)> {
        vec![
            self.forest_food_percent,
            self.forest_max_food_value,
            self.percent_memory,
            self.radius_food_search,
        ]
    }
}

pub const ABM_VARIABLES: [&str; 4] = [
    "forest_food_percent",
    "forest_max_food_value",
    "percent_memory",
    "radius_food_search",
];

/// `base` with the four calibrated quantities replaced by `x`.
pub fn apply_parameters(base: &RunConfig, x: &[f64]) -> RunConfig {
    let mut c = base.clone();
    c.scenario.forest_food_percent = Some(x[0]);
    c.scenario.forest_max_food_value = Some(x[1]);
    c.agent.percent_memory = x[2];
    c.agent.radius_food_search = x[3];
    c
}

/// Movement statistics of a batch, replicates run one after another.
pub fn simulated_objectives(
    config: &RunConfig,
    world: &World,
    seed: u64,
) -> Result<MovementObjectives, CalibrationError> {
    let mut trajectories = Vec::with_capacity(config.run.replicates);
    for i in 0..config.run.replicates {
        let out = run_replicate(config, world, i)?;
        trajectories.push(out.ticks.iter().map(|t| (t.x, t.y)).collect::<Vec<_>>());
    }
    movement_objectives(&trajectories, TICKS_PER_DAY, seed)
}

/// Inverse calibration of the forest food and foraging parameters against
/// observed movement statistics.
pub fn calibrate_abm(
    base: &RunConfig,
    targets: &MovementObjectives,
    bounds: &AbmBounds,
    ga: &NsgaConfig,
) -> Result<ParetoFront, CalibrationError> {
    let world = prepare_world(base)?;
    let evaluate = |x: &[f64]| -> Result<Vec<f64>, String> {
        let config = apply_parameters(base, x);
        config.validate().map_err(|e| e.to_string())?;
        let sim = simulated_objectives(&config, &world, ga.seed).map_err(|e| e.to_string())?;
        Ok(targets.penalties(&sim).to_vec())
    };
    nsga2(evaluate, &bounds.as_vec(), ga)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::dominates;
    use crate::environment::SyntheticSpec;

    #[test]
    fn small_calibration_runs() {
        let mut base = RunConfig::default();
        base.run.days = 1;
        base.run.replicates = 2;
        base.landscape.synthetic = Some(SyntheticSpec {
            nrows: 40,
            ncols: 60,
            ridge_height: 0.0,
            ..Default::default()
        });
        let world = prepare_world(&base).unwrap();
        let targets = simulated_objectives(&base, &world, 1).unwrap();
        let ga = NsgaConfig {
            population: 6,
            generations: 2,
            ..Default::default()
        };
        let front = calibrate_abm(&base, &targets, &AbmBounds::default(), &ga).unwrap();
        assert!(!front.members.is_empty());
        for a in &front.members {
            assert_eq!(a.objectives.len(), 3);
            assert!(a.objectives.iter().all(|v| *v >= 0.0));
            for b in &front.members {
                assert!(!dominates(&a.objectives, &b.objectives));
            }
        }
    }

    #[test]
    fn parameters_land_in_config() {
        let c = apply_parameters(&RunConfig::default(), &[0.2, 30.0, 0.5, 900.0]);
        assert_eq!(c.scenario.resolve().forest_food_percent, 0.2);
        assert_eq!(c.scenario.resolve().forest_max_food_value, 30.0);
        assert_eq!(c.agent.percent_memory, 0.5);
        assert_eq!(c.agent.radius_food_search, 900.0);
    }
}
