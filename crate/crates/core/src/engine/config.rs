use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::agent::{AgentParams, Mode};
use crate::environment::{
    AgriShares, DisturbanceSchedule, FoodScenario, ScenarioConfig, SyntheticSpec, TemperatureField, TemperatureModel,
    DEFAULT_MONTHLY_TMAX, DEFAULT_MONTHLY_TMIN,
};
use crate::terrain::{load_ascii_grid, NodataPolicy};

/// Everything needed to reproduce a batch.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub run: RunSettings,
    pub landscape: LandscapeConfig,
    pub scenario: ScenarioSpec,
    pub agent: AgentParams,
    pub disturbance: DisturbanceSchedule,
    pub temperature: TemperatureConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSettings {
    pub year: i32,
    pub month: u32,
    pub days: u32,
    pub replicates: usize,
    pub master_seed: u64,
    /// Initial position (m); defaults to the synthetic landscape's start.
    pub start: Option<[f64; 2]>,
    /// Initial mode; drawn between random-walk and foraging when absent.
    pub initial_mode: Option<Mode>,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            year: 2010,
            month: 1,
            days: 30,
            replicates: 192,
            master_seed: 1,
            start: None,
            initial_mode: None,
        }
    }
}

/// Either a synthetic landscape or a set of ASCII grids on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LandscapeConfig {
    pub synthetic: Option<SyntheticSpec>,
    pub elevation: Option<PathBuf>,
    pub landuse: Option<PathBuf>,
    pub buildings: Option<PathBuf>,
    /// Binary home-garden mask; drawn from `agri_shares` when absent.
    pub agri_plots: Option<PathBuf>,
    pub agri_shares: AgriShares,
    /// Replacement for nodata cells; the grid minimum when absent.
    pub nodata_value: Option<f64>,
}

impl Default for LandscapeConfig {
    fn default() -> Self {
        Self {
            synthetic: Some(SyntheticSpec::default()),
            elevation: None,
            landuse: None,
            buildings: None,
            agri_plots: None,
            agri_shares: AgriShares::default(),
            nodata_value: None,
        }
    }
}

impl LandscapeConfig {
    pub fn nodata_policy(&self) -> NodataPolicy {
        self.nodata_value.map(NodataPolicy::Value).unwrap_or_default()
    }
}

/// A named food scenario with optional explicit overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioSpec {
    pub name: FoodScenario,
    pub forest_food_percent: Option<f64>,
    pub cropland_food_percent: Option<f64>,
    pub forest_max_food_value: Option<f64>,
    pub cropland_max_food_value: Option<f64>,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            name: FoodScenario::S1,
            forest_food_percent: None,
            cropland_food_percent: None,
            forest_max_food_value: None,
            cropland_max_food_value: None,
        }
    }
}

impl ScenarioSpec {
    pub fn named(name: FoodScenario) -> Self {
        Self {
            name,
            ..Default::default()
        }
    }

    pub fn resolve(&self) -> ScenarioConfig {
        let base = self.name.config();
        ScenarioConfig {
            forest_food_percent: self.forest_food_percent.unwrap_or(base.forest_food_percent),
            cropland_food_percent: self.cropland_food_percent.unwrap_or(base.cropland_food_percent),
            forest_max_food_value: self.forest_max_food_value.unwrap_or(base.forest_max_food_value),
            cropland_max_food_value: self.cropland_max_food_value.unwrap_or(base.cropland_max_food_value),
        }
    }
}

/// One month's value: a constant or an ASCII grid path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MonthlyValue {
    Scalar(f64),
    Grid(PathBuf),
}

/// Daily minimum or maximum temperature: a single value for the year or
/// twelve monthly values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TemperatureSeries {
    Constant(f64),
    Monthly(Vec<MonthlyValue>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TemperatureConfig {
    pub tmin: TemperatureSeries,
    pub tmax: TemperatureSeries,
    pub min_hour: u32,
    pub max_hour: u32,
}

impl Default for TemperatureConfig {
    fn default() -> Self {
        let monthly = |v: &[f64; 12]| TemperatureSeries::Monthly(v.iter().map(|t| MonthlyValue::Scalar(*t)).collect());
        Self {
            tmin: monthly(&DEFAULT_MONTHLY_TMIN),
            tmax: monthly(&DEFAULT_MONTHLY_TMAX),
            min_hour: 5,
            max_hour: 17,
        }
    }
}

impl TemperatureConfig {
    pub fn constant(tmin: f64, tmax: f64) -> Self {
        Self {
            tmin: TemperatureSeries::Constant(tmin),
            tmax: TemperatureSeries::Constant(tmax),
            ..Default::default()
        }
    }

    pub fn build(&self, policy: NodataPolicy) -> Result<TemperatureModel, EngineError> {
        let fields = |series: &TemperatureSeries, name: &str| -> Result<Vec<TemperatureField>, EngineError> {
            match series {
                TemperatureSeries::Constant(v) => Ok(vec![TemperatureField::Uniform(*v); 12]),
                TemperatureSeries::Monthly(values) if values.len() == 12 => values
                    .iter()
                    .enumerate()
                    .map(|(m, v)| match v {
                        MonthlyValue::Scalar(t) => Ok(TemperatureField::Uniform(*t)),
                        MonthlyValue::Grid(p) => {
                            let field = format!("temperature.{name}[{m}]");
                            load_grid(p, policy, &field).map(TemperatureField::Grid)
                        }
                    })
                    .collect(),
                TemperatureSeries::Monthly(values) => Err(EngineError::config(
                    format!("temperature.{name}"),
                    format!("expected 12 monthly values, got {}", values.len()),
                )),
            }
        };
        if self.max_hour != (self.min_hour + 12) % 24 || self.min_hour > 23 {
            return Err(EngineError::config(
                "temperature.max_hour",
                "the diurnal curve needs max_hour = min_hour + 12",
            ));
        }
        let mut model = TemperatureModel::new(fields(&self.tmin, "tmin")?, fields(&self.tmax, "tmax")?)
            .map_err(|e| EngineError::config("temperature", e.to_string()))?;
        model.min_hour = self.min_hour;
        model.max_hour = self.max_hour;
        Ok(model)
    }
}

pub(crate) fn load_grid(
    path: &Path,
    policy: NodataPolicy,
    field: &str,
) -> Result<crate::terrain::RasterGrid, EngineError> {
    if !path.exists() {
        return Err(EngineError::config(
            field,
            format!("file {} does not exist", path.display()),
        ));
    }
    load_ascii_grid(path, policy).map_err(|e| match e {
        crate::terrain::TerrainError::Io { path, source } => EngineError::Io { path, source },
        other => EngineError::config(field, other.to_string()),
    })
}

impl RunConfig {
    /// Checks everything that can be checked without touching the disk.
    pub fn validate(&self) -> Result<(), EngineError> {
        let r = &self.run;
        if !(1..=12).contains(&r.month) {
            return Err(EngineError::config("run.month", format!("{} not in 1..=12", r.month)));
        }
        if r.days < 1 {
            return Err(EngineError::config("run.days", "must be >= 1"));
        }
        if r.replicates < 1 {
            return Err(EngineError::config("run.replicates", "must be >= 1"));
        }
        if chrono::NaiveDate::from_ymd_opt(r.year, r.month, 1).is_none() {
            return Err(EngineError::config(
                "run.year",
                format!("{} is not a usable year", r.year),
            ));
        }
        self.agent
            .validate()
            .map_err(|e| EngineError::config("agent", e.to_string()))?;
        self.scenario
            .resolve()
            .validate()
            .map_err(|e| EngineError::config("scenario", e.to_string()))?;
        self.landscape
            .agri_shares
            .validate()
            .map_err(|e| EngineError::config("landscape.agri_shares", e.to_string()))?;
        let d = &self.disturbance;
        if d.day_start_minute >= d.day_end_minute || d.day_end_minute > 24 * 60 {
            return Err(EngineError::config(
                "disturbance",
                "need day_start_minute < day_end_minute <= 1440",
            ));
        }
        if self.landscape.synthetic.is_none() {
            if self.landscape.elevation.is_none() {
                return Err(EngineError::config(
                    "landscape.elevation",
                    "required when no synthetic landscape is given",
                ));
            }
            if self.landscape.landuse.is_none() {
                return Err(EngineError::config(
                    "landscape.landuse",
                    "required when no synthetic landscape is given",
                ));
            }
            if r.start.is_none() {
                return Err(EngineError::config("run.start", "required for file-based landscapes"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let c = RunConfig::default();
        c.validate().unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = serde_json::from_str::<RunConfig>(r#"{"run": {"dayz": 3}}"#).unwrap_err();
        assert!(err.to_string().contains("dayz"));
    }

    #[test]
    fn missing_dem_names_the_field() {
        let c: RunConfig = serde_json::from_str(r#"{"landscape": {"synthetic": null, "landuse": "lu.asc"}}"#).unwrap();
        let err = c.validate().unwrap_err();
        assert!(err.to_string().contains("landscape.elevation"), "{err}");
    }

    #[test]
    fn scenario_overrides() {
        let s: ScenarioSpec = serde_json::from_str(r#"{"name": "S4", "cropland_max_food_value": 50}"#).unwrap();
        let r = s.resolve();
        assert_eq!(r.forest_max_food_value, 20.0);
        assert_eq!(r.cropland_max_food_value, 50.0);
        assert_eq!(r.forest_food_percent, 0.1);
    }

    #[test]
    fn temperature_forms() {
        let t: TemperatureConfig = serde_json::from_str(r#"{"tmin": 20, "tmax": 30}"#).unwrap();
        let m = t.build(NodataPolicy::GridMinimum).unwrap();
        assert_eq!(m.range(0, 6).unwrap(), (20.0, 30.0));
        let bad: TemperatureConfig = serde_json::from_str(r#"{"tmin": [1, 2], "tmax": 30}"#).unwrap();
        assert!(bad.build(NodataPolicy::GridMinimum).is_err());
        TemperatureConfig::default().build(NodataPolicy::GridMinimum).unwrap();
    }
}
