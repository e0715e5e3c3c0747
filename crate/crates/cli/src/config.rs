use std::path::{Path, PathBuf};

use elephant_abm::agent::AgentParams;
use elephant_abm::analytics::DEFAULT_EPSILONS;
use elephant_abm::calibration::{AbmBounds, HmmOptions, NsgaConfig, NOMINAL_INTERVAL_S};
use elephant_abm::engine::{LandscapeConfig, RunConfig, RunSettings, ScenarioSpec, TemperatureConfig};
use elephant_abm::environment::DisturbanceSchedule;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// The full configuration document.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CliConfig {
    pub run: RunSettings,
    pub landscape: LandscapeConfig,
    pub scenario: ScenarioSpec,
    pub agent: AgentParams,
    pub disturbance: DisturbanceSchedule,
    pub temperature: TemperatureConfig,
    pub calibration: CalibrationSection,
    pub analysis: AnalysisSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationSection {
    pub hmm: HmmOptions,
    pub ga: NsgaConfig,
    pub bounds: AbmBounds,
    pub slope_tolerances: Vec<f64>,
    /// Nominal relocation interval (s); larger deviations split a track.
    pub nominal_interval_s: f64,
    pub bootstrap_seed: u64,
}

impl Default for CalibrationSection {
    fn default() -> Self {
        Self {
            hmm: HmmOptions::default(),
            ga: NsgaConfig::default(),
            bounds: AbmBounds::default(),
            slope_tolerances: vec![25.0, 50.0, 100.0, 200.0],
            nominal_interval_s: NOMINAL_INTERVAL_S,
            bootstrap_seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisSection {
    pub kde_levels: Vec<f64>,
    /// KDE grid resolution (m); a fifth of the bandwidth when absent.
    pub kde_cellsize: Option<f64>,
    pub epsilons: Vec<f64>,
    pub ddmi_kg: f64,
    pub dbscan_eps: f64,
    pub dbscan_min_pts: usize,
    /// Occupancy grid resolution (m) for the divergence diagnostic.
    pub occupancy_cellsize: f64,
    pub ticks_per_day: usize,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            kde_levels: vec![0.9, 0.95, 1.0],
            kde_cellsize: None,
            epsilons: DEFAULT_EPSILONS.to_vec(),
            ddmi_kg: 68.0,
            dbscan_eps: 1000.0,
            dbscan_min_pts: 4,
            occupancy_cellsize: 30.0,
            ticks_per_day: elephant_abm::TICKS_PER_DAY,
        }
    }
}

impl CliConfig {
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            run: self.run.clone(),
            landscape: self.landscape.clone(),
            scenario: self.scenario.clone(),
            agent: self.agent.clone(),
            disturbance: self.disturbance.clone(),
            temperature: self.temperature.clone(),
        }
    }
}

/// Parses `path=value`; the value is read as JSON when it parses, as a
/// string otherwise.
fn parse_override(spec: &str) -> Result<(Vec<String>, Value), CliError> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set {spec:?}: expected dotted.path=value")))?;
    let keys: Vec<String> = path.split('.').map(str::to_string).collect();
    if keys.iter().any(String::is_empty) {
        return Err(CliError::Config(format!("--set {spec:?}: empty key in path")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    Ok((keys, value))
}

pub fn apply_override(doc: &mut Value, spec: &str) -> Result<(), CliError> {
    let (keys, value) = parse_override(spec)?;
    let mut node = doc;
    for (i, key) in keys.iter().enumerate() {
        if node.is_null() {
            *node = Value::Object(Default::default());
        }
        let map = node
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("--set {spec:?}: {} is not an object", keys[..i].join("."))))?;
        node = map.entry(key.clone()).or_insert(Value::Null);
    }
    *node = value;
    Ok(())
}

/// Relative paths inside a config file are taken relative to the file.
fn resolve_paths(doc: &mut Value, base: &Path) {
    let fix = |v: &mut Value| {
        if let Value::String(s) = v {
            let p = Path::new(s.as_str());
            if p.is_relative() {
                *s = base.join(p).display().to_string();
            }
        }
    };
    if let Some(land) = doc.get_mut("landscape").and_then(Value::as_object_mut) {
        for key in ["elevation", "landuse", "buildings", "agri_plots"] {
            if let Some(v) = land.get_mut(key) {
                fix(v);
            }
        }
    }
    if let Some(temp) = doc.get_mut("temperature").and_then(Value::as_object_mut) {
        for key in ["tmin", "tmax"] {
            if let Some(Value::Array(months)) = temp.get_mut(key) {
                months.iter_mut().for_each(fix);
            }
        }
    }
}

pub fn load_config(path: Option<&PathBuf>, overrides: &[String]) -> Result<CliConfig, CliError> {
    let mut doc = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p.display(), e))?;
            let mut doc: Value =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            resolve_paths(&mut doc, p.parent().unwrap_or(Path::new(".")));
            doc
        }
        None => Value::Object(Default::default()),
    };
    for spec in overrides {
        apply_override(&mut doc, spec)?;
    }
    let config: CliConfig = serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("{path}: {}", e.into_inner()))
    })?;
    config.run_config().validate()?;
    Ok(config)
}
