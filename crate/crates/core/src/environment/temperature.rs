use std::f64::consts::PI;

use super::EnvironmentError;
use crate::terrain::RasterGrid;

/// A monthly temperature surface: either one value for the whole landscape
/// or a per-cell grid.
#[derive(Debug, Clone, PartialEq)]
pub enum TemperatureField {
    Uniform(f64),
    Grid(RasterGrid),
}

impl TemperatureField {
    fn at(&self, cell: usize) -> f64 {
        match self {
            TemperatureField::Uniform(v) => *v,
            TemperatureField::Grid(g) => g.values[cell],
        }
    }
}

/// Monthly daily-minimum and daily-maximum surfaces with a cosine diurnal cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureModel {
    tmin: Vec<TemperatureField>,
    tmax: Vec<TemperatureField>,
    pub min_hour: u32,
    pub max_hour: u32,
}

/// Monthly mean daily minimum / maximum (deg C) for a humid tropical
/// foothill site; February to May is the hot dry season.
pub const DEFAULT_MONTHLY_TMIN: [f64; 12] = [21.0, 22.5, 24.0, 25.0, 24.5, 23.0, 22.5, 22.5, 22.5, 22.5, 22.0, 21.5];
pub const DEFAULT_MONTHLY_TMAX: [f64; 12] = [31.5, 34.5, 36.0, 36.0, 34.5, 30.5, 29.5, 30.0, 30.5, 30.5, 30.5, 31.0];

impl Default for TemperatureModel {
    fn default() -> Self {
        Self::uniform(&DEFAULT_MONTHLY_TMIN, &DEFAULT_MONTHLY_TMAX).expect("default climatology is valid")
    }
}

impl TemperatureModel {
    pub fn new(tmin: Vec<TemperatureField>, tmax: Vec<TemperatureField>) -> Result<Self, EnvironmentError> {
        if tmin.len() != 12 || tmax.len() != 12 {
            return Err(EnvironmentError::Temperature(format!(
                "expected 12 monthly surfaces, got {} tmin / {} tmax",
                tmin.len(),
                tmax.len()
            )));
        }
        for (m, (lo, hi)) in tmin.iter().zip(&tmax).enumerate() {
            let ok = match (lo, hi) {
                (TemperatureField::Uniform(a), TemperatureField::Uniform(b)) => b >= a,
                (TemperatureField::Grid(a), TemperatureField::Grid(b)) => {
                    a.header.same_geometry(&b.header) && a.values.iter().zip(&b.values).all(|(x, y)| y >= x)
                }
                (TemperatureField::Uniform(a), TemperatureField::Grid(b)) => b.values.iter().all(|y| y >= a),
                (TemperatureField::Grid(a), TemperatureField::Uniform(b)) => a.values.iter().all(|x| b >= x),
            };
            if !ok {
                return Err(EnvironmentError::Temperature(format!(
                    "month {}: tmax below tmin or grids misaligned",
                    m + 1
                )));
            }
        }
        Ok(Self {
            tmin,
            tmax,
            min_hour: 5,
            max_hour: 17,
        })
    }

    pub fn uniform(tmin: &[f64; 12], tmax: &[f64; 12]) -> Result<Self, EnvironmentError> {
        Self::new(
            tmin.iter().map(|v| TemperatureField::Uniform(*v)).collect(),
            tmax.iter().map(|v| TemperatureField::Uniform(*v)).collect(),
        )
    }

    /// Same minimum and maximum for every month.
    pub fn constant(tmin: f64, tmax: f64) -> Result<Self, EnvironmentError> {
        Self::uniform(&[tmin; 12], &[tmax; 12])
    }

    pub fn range(&self, cell: usize, month: u32) -> Result<(f64, f64), EnvironmentError> {
        if !(1..=12).contains(&month) {
            return Err(EnvironmentError::Month(month));
        }
        let m = month as usize - 1;
        Ok((self.tmin[m].at(cell), self.tmax[m].at(cell)))
    }
}

/// Hourly temperature: `(tmax+tmin)/2 - (tmax-tmin)/2 * cos(2pi (hour-min_hour)/24)`,
/// which bottoms out at `min_hour` and peaks twelve hours later.
pub fn temperature_at(model: &TemperatureModel, cell: usize, month: u32, hour: u32) -> Result<f64, EnvironmentError> {
    if hour > 23 {
        return Err(EnvironmentError::Hour(hour));
    }
    let (lo, hi) = model.range(cell, month)?;
    let phase = 2.0 * PI * (hour as f64 - model.min_hour as f64) / 24.0;
    Ok((hi + lo) / 2.0 - (hi - lo) / 2.0 * phase.cos())
}

/// Temperature of every cell for one month and hour.
#[derive(Debug, Clone, PartialEq)]
pub enum HourlyTemperature {
    Uniform(f64),
    Grid(Vec<f64>),
}

impl HourlyTemperature {
    pub fn at(&self, cell: usize) -> f64 {
        match self {
            HourlyTemperature::Uniform(v) => *v,
            HourlyTemperature::Grid(g) => g[cell],
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, HourlyTemperature::Uniform(_))
    }
}

/// Evaluates the diurnal curve for a whole month/hour at once.
pub fn hourly_field(model: &TemperatureModel, month: u32, hour: u32) -> Result<HourlyTemperature, EnvironmentError> {
    if !(1..=12).contains(&month) {
        return Err(EnvironmentError::Month(month));
    }
    let m = month as usize - 1;
    match (&model.tmin[m], &model.tmax[m]) {
        (TemperatureField::Uniform(_), TemperatureField::Uniform(_)) => {
            temperature_at(model, 0, month, hour).map(HourlyTemperature::Uniform)
        }
        (TemperatureField::Grid(g), _) | (_, TemperatureField::Grid(g)) => (0..g.values.len())
            .map(|c| temperature_at(model, c, month, hour))
            .collect::<Result<Vec<_>, _>>()
            .map(HourlyTemperature::Grid),
    }
}
