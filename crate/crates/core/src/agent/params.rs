use rand_distr::Gamma;
use serde::{Deserialize, Serialize};

use super::AgentError;

/// Two-state movement model: Markov switching between the encamped
/// (random-walk) and exploratory (foraging) regimes, with their step and
/// turning distributions. Step lengths are in kilometres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MovementDistributions {
    pub p11: f64,
    pub p12: f64,
    pub p22: f64,
    pub p21: f64,
    pub encamped_step_mean_km: f64,
    pub encamped_step_sd_km: f64,
    pub exploratory_step_mean_km: f64,
    pub exploratory_step_sd_km: f64,
    pub encamped_turn_mean: f64,
    pub encamped_turn_kappa: f64,
    /// Half-width (degrees) of the uniform noise added to target headings.
    pub heading_noise_deg: f64,
}

impl Default for MovementDistributions {
    fn default() -> Self {
        Self {
            p11: 0.8775,
            p12: 0.1225,
            p22: 0.9096,
            p21: 0.0904,
            encamped_step_mean_km: 0.0040,
            encamped_step_sd_km: 0.0034,
            exploratory_step_mean_km: 0.0398,
            exploratory_step_sd_km: 0.0378,
            encamped_turn_mean: -3.0232,
            encamped_turn_kappa: 0.3336,
            heading_noise_deg: 15.0,
        }
    }
}

/// Gamma distribution from its mean and standard deviation.
pub fn gamma_from_moments(mean: f64, sd: f64) -> Result<Gamma<f64>, AgentError> {
    if !(mean > 0.0 && sd > 0.0) {
        return Err(AgentError::Param(format!(
            "gamma needs mean > 0 and sd > 0, got {mean}, {sd}"
        )));
    }
    let shape = (mean / sd).powi(2);
    let scale = sd * sd / mean;
    Gamma::new(shape, scale).map_err(|e| AgentError::Param(e.to_string()))
}

impl MovementDistributions {
    pub fn validate(&self) -> Result<(), AgentError> {
        for (name, a, b) in [("p11 + p12", self.p11, self.p12), ("p22 + p21", self.p22, self.p21)] {
            if (a + b - 1.0).abs() > 1e-9 || !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                return Err(AgentError::Param(format!(
                    "{name} = {} is not a probability row",
                    a + b
                )));
            }
        }
        gamma_from_moments(self.encamped_step_mean_km, self.encamped_step_sd_km)?;
        gamma_from_moments(self.exploratory_step_mean_km, self.exploratory_step_sd_km)?;
        if self.encamped_turn_kappa < 0.0 || !self.encamped_turn_mean.is_finite() {
            return Err(AgentError::Param(
                "encamped turning needs a finite mean and kappa >= 0".into(),
            ));
        }
        if !(0.0..=180.0).contains(&self.heading_noise_deg) {
            return Err(AgentError::Param(format!(
                "heading noise {} not in [0, 180]",
                self.heading_noise_deg
            )));
        }
        Ok(())
    }

    pub fn encamped_step(&self) -> Gamma<f64> {
        gamma_from_moments(self.encamped_step_mean_km, self.encamped_step_sd_km).expect("validated")
    }

    pub fn exploratory_step(&self) -> Gamma<f64> {
        gamma_from_moments(self.exploratory_step_mean_km, self.exploratory_step_sd_km).expect("validated")
    }
}

/// Which override wins when the agent is both starving and hot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwitchOrder {
    /// Low fitness forces foraging even in the heat.
    #[default]
    FitnessFirst,
    /// Heat forces thermoregulation even when starving.
    TemperatureFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AgentParams {
    pub age: f64,
    pub initial_fitness: f64,
    pub radius_food_search: f64,
    pub radius_water_search: f64,
    pub radius_forest_search: f64,
    /// Home gardens this close (m) to the forest are known from the start.
    pub knowledge_from_fringe: f64,
    /// Fraction of food-bearing forest cells known from the start.
    pub percent_memory: f64,
    pub fitness_threshold: f64,
    pub movement_fitness_deprecation: f64,
    pub thermoregulation_threshold: f64,
    /// Logistic sensitivity; -0.1 for bulls, -0.2 for herds with calves.
    pub thermoregulation_state: f64,
    pub terrain_radius: f64,
    pub tolerance: f64,
    /// Cells steeper than this (degrees) contribute to movement cost.
    pub slope_limit: f64,
    pub aggression: f64,
    pub food_habituation: bool,
    pub disturbance_tolerance: f64,
    pub prob_crop_damage: f64,
    pub prob_infrastructure_damage: f64,
    pub threshold_num_days: u32,
    pub switch_order: SwitchOrder,
    pub movement: MovementDistributions,
}

impl Default for AgentParams {
    fn default() -> Self {
        Self {
            age: 40.0,
            initial_fitness: 1.0,
            radius_food_search: 750.0,
            radius_water_search: 750.0,
            radius_forest_search: 1500.0,
            knowledge_from_fringe: 1500.0,
            percent_memory: 0.375,
            fitness_threshold: 0.4,
            movement_fitness_deprecation: 0.000347,
            thermoregulation_threshold: 28.0,
            thermoregulation_state: -0.1,
            terrain_radius: 750.0,
            tolerance: 100.0,
            slope_limit: 30.0,
            aggression: 0.2,
            food_habituation: false,
            disturbance_tolerance: 0.5,
            prob_crop_damage: 0.1,
            prob_infrastructure_damage: 0.05,
            threshold_num_days: 3,
            switch_order: SwitchOrder::FitnessFirst,
            movement: MovementDistributions::default(),
        }
    }
}

impl AgentParams {
    pub fn validate(&self) -> Result<(), AgentError> {
        let unit = [
            ("initial_fitness", self.initial_fitness),
            ("percent_memory", self.percent_memory),
            ("fitness_threshold", self.fitness_threshold),
            ("aggression", self.aggression),
            ("prob_crop_damage", self.prob_crop_damage),
            ("prob_infrastructure_damage", self.prob_infrastructure_damage),
        ];
        for (name, v) in unit {
            if !(0.0..=1.0).contains(&v) {
                return Err(AgentError::Param(format!("{name} = {v} not in [0, 1]")));
            }
        }
        let positive = [
            ("radius_food_search", self.radius_food_search),
            ("radius_water_search", self.radius_water_search),
            ("radius_forest_search", self.radius_forest_search),
            ("terrain_radius", self.terrain_radius),
            ("tolerance", self.tolerance),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(AgentError::Param(format!("{name} = {v} must be > 0")));
            }
        }
        if self.knowledge_from_fringe < 0.0 || self.movement_fitness_deprecation < 0.0 {
            return Err(AgentError::Param(
                "knowledge_from_fringe and deprecation must be >= 0".into(),
            ));
        }
        if !(self.age > -3.16) {
            return Err(AgentError::Param(format!(
                "age {} below the growth-curve origin",
                self.age
            )));
        }
        if !self.thermoregulation_threshold.is_finite() || !(self.thermoregulation_state < 0.0) {
            return Err(AgentError::Param(
                "thermoregulation needs a finite threshold and a negative state".into(),
            ));
        }
        self.movement.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Distribution;

    #[test]
    fn defaults_are_valid() {
        AgentParams::default().validate().unwrap();
    }

    #[test]
    fn gamma_moments_round_trip() {
        let g = gamma_from_moments(0.0398, 0.0378).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| g.sample(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 0.0398).abs() < 0.0005);
        assert!((var.sqrt() - 0.0378).abs() < 0.0008);
    }

    #[test]
    fn rejects_bad_transition_rows() {
        let m = MovementDistributions {
            p12: 0.2,
            ..Default::default()
        };
        assert!(m.validate().is_err());
        assert!(gamma_from_moments(0.0, 1.0).is_err());
    }

    #[test]
    fn rejects_out_of_range_params() {
        let p = AgentParams {
            aggression: 1.5,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }
}
