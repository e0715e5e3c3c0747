use rand::Rng;
use serde::{Deserialize, Serialize};

use super::EnvironmentError;
use crate::terrain::TerrainStack;

/// Food-availability parameters of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Probability that a forest cell holds food.
    pub forest_food_percent: f64,
    /// Probability that a home-garden cell holds food this month.
    pub cropland_food_percent: f64,
    /// Upper bound (kg) of the uniform forest food amount.
    pub forest_max_food_value: f64,
    pub cropland_max_food_value: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        FoodScenario::S1.config()
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), EnvironmentError> {
        for (name, p) in [
            ("forest_food_percent", self.forest_food_percent),
            ("cropland_food_percent", self.cropland_food_percent),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(EnvironmentError::Scenario(format!("{name} = {p} not in [0, 1]")));
            }
        }
        for (name, v) in [
            ("forest_max_food_value", self.forest_max_food_value),
            ("cropland_max_food_value", self.cropland_max_food_value),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(EnvironmentError::Scenario(format!("{name} = {v} must be > 0")));
            }
        }
        Ok(())
    }

    /// Expected forest food density in tonnes per km² for cells of the given size.
    pub fn forest_density_t_per_km2(&self, cellsize: f64) -> f64 {
        let kg_per_cell = self.forest_food_percent * self.forest_max_food_value / 2.0;
        kg_per_cell / 1000.0 / (cellsize * cellsize / 1e6)
    }
}

/// The five forest food-availability scenarios, scarce (S1) to abundant (S5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FoodScenario {
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl FoodScenario {
    pub const ALL: [FoodScenario; 5] = [
        FoodScenario::S1,
        FoodScenario::S2,
        FoodScenario::S3,
        FoodScenario::S4,
        FoodScenario::S5,
    ];

    pub fn forest_max_food_value(self) -> f64 {
        match self {
            FoodScenario::S1 => 5.0,
            FoodScenario::S2 => 10.0,
            FoodScenario::S3 => 15.0,
            FoodScenario::S4 => 20.0,
            FoodScenario::S5 => 25.0,
        }
    }

    pub fn config(self) -> ScenarioConfig {
        ScenarioConfig {
            forest_food_percent: 0.1,
            cropland_food_percent: 0.3,
            forest_max_food_value: self.forest_max_food_value(),
            cropland_max_food_value: 100.0,
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name.trim().to_ascii_uppercase().as_str() {
            "S1" => Some(FoodScenario::S1),
            "S2" => Some(FoodScenario::S2),
            "S3" => Some(FoodScenario::S3),
            "S4" => Some(FoodScenario::S4),
            "S5" => Some(FoodScenario::S5),
            _ => None,
        }
    }
}

/// Food (kg) per cell; replicate-private and only ever decremented.
#[derive(Debug, Clone, PartialEq)]
pub struct FoodGrid {
    values: Vec<f64>,
}

impl FoodGrid {
    pub fn new(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| *v >= 0.0));
        Self { values }
    }

    pub fn zeros(len: usize) -> Self {
        Self { values: vec![0.0; len] }
    }

    pub fn get(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn set(&mut self, idx: usize, kg: f64) {
        self.values[idx] = kg.max(0.0);
    }

    /// Remove up to `kg` from a cell; returns the amount actually removed.
    pub fn take(&mut self, idx: usize, kg: f64) -> f64 {
        let cell = &mut self.values[idx];
        let taken = kg.clamp(0.0, *cell);
        *cell -= taken;
        taken
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Draw a fresh food layer: forest cells and home-garden cells each hold food
/// with their scenario probability, in a uniform amount up to the scenario
/// maximum. Cells are visited in row-major order.
pub fn init_food<R: Rng + ?Sized>(stack: &TerrainStack, scenario: &ScenarioConfig, rng: &mut R) -> FoodGrid {
    let n = stack.header().len();
    let mut values = vec![0.0; n];
    for (idx, v) in values.iter_mut().enumerate() {
        let (p, max) = if stack.is_forest(idx) {
            (scenario.forest_food_percent, scenario.forest_max_food_value)
        } else if stack.is_agri_plot(idx) {
            (scenario.cropland_food_percent, scenario.cropland_max_food_value)
        } else {
            continue;
        };
        if rng.random::<f64>() < p {
            *v = rng.random::<f64>() * max;
        }
    }
    FoodGrid { values }
}
