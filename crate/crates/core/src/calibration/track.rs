use std::path::Path;

use chrono::{DateTime, NaiveDateTime};
use serde::Deserialize;

use super::CalibrationError;
use crate::agent::{bearing, wrap_angle};

/// Nominal relocation interval in seconds.
pub const NOMINAL_INTERVAL_S: f64 = 300.0;
/// Zero-length steps are raised to this length (km) so that positive-support
/// step densities stay finite.
pub const MIN_STEP_KM: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fix {
    pub time: NaiveDateTime,
    pub x: f64,
    pub y: f64,
}

/// Time-ordered fixes in projected metres.
#[derive(Debug, Clone, PartialEq)]
pub struct RelocationTrack {
    fixes: Vec<Fix>,
}

impl RelocationTrack {
    pub fn new(fixes: Vec<Fix>) -> Result<Self, CalibrationError> {
        if let Some(i) = fixes.windows(2).position(|w| w[1].time <= w[0].time) {
            return Err(CalibrationError::NotIncreasing { index: i + 1 });
        }
        if fixes.iter().any(|f| !(f.x.is_finite() && f.y.is_finite())) {
            return Err(CalibrationError::Degenerate("non-finite coordinate in track".into()));
        }
        Ok(Self { fixes })
    }

    /// Fixes at a regular interval starting from `start`.
    pub fn regular(start: NaiveDateTime, interval_s: i64, points: &[(f64, f64)]) -> Result<Self, CalibrationError> {
        let fixes = points
            .iter()
            .enumerate()
            .map(|(i, (x, y))| Fix {
                time: start + chrono::Duration::seconds(interval_s * i as i64),
                x: *x,
                y: *y,
            })
            .collect();
        Self::new(fixes)
    }

    pub fn fixes(&self) -> &[Fix] {
        &self.fixes
    }

    pub fn len(&self) -> usize {
        self.fixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixes.is_empty()
    }
}

/// Contiguous step lengths (km) and turning angles. `turns[i]` is the
/// heading change between step `i - 1` and step `i`; it is missing for the
/// first step and around zero-length steps.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepSeries {
    pub steps: Vec<f64>,
    pub turns: Vec<Option<f64>>,
}

impl StepSeries {
    pub fn new(steps: Vec<f64>, turns: Vec<Option<f64>>) -> Self {
        assert_eq!(steps.len(), turns.len(), "one turn slot per step");
        Self { steps, turns }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn parse_time(s: &str) -> Option<NaiveDateTime> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.naive_utc());
    }
    ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M"]
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

#[derive(Deserialize)]
struct Row {
    timestamp: String,
    x: f64,
    y: f64,
}

/// Reads a `timestamp,x,y` CSV with ISO-8601 timestamps.
pub fn read_track_csv(path: &Path) -> Result<RelocationTrack, CalibrationError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CalibrationError::csv(path, e))?;
    let mut fixes = Vec::new();
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| CalibrationError::csv(path, e))?;
        let time = parse_time(&row.timestamp).ok_or_else(|| CalibrationError::Parse {
            path: path.display().to_string(),
            line: i + 2,
            message: format!("bad timestamp {:?}", row.timestamp),
        })?;
        fixes.push(Fix {
            time,
            x: row.x,
            y: row.y,
        });
    }
    RelocationTrack::new(fixes)
}

/// Splits the track wherever the interval deviates from `nominal_s` by more
/// than half, and converts each piece into steps and turns.
pub fn extract_steps_with(track: &RelocationTrack, nominal_s: f64) -> Result<Vec<StepSeries>, CalibrationError> {
    let fixes = track.fixes();
    if fixes.len() < 3 {
        return Err(CalibrationError::TooFewFixes(fixes.len()));
    }
    let mut pieces: Vec<&[Fix]> = Vec::new();
    let mut start = 0;
    for i in 1..fixes.len() {
        let dt = (fixes[i].time - fixes[i - 1].time).num_milliseconds() as f64 / 1000.0;
        if (dt - nominal_s).abs() > 0.5 * nominal_s {
            pieces.push(&fixes[start..i]);
            start = i;
        }
    }
    pieces.push(&fixes[start..]);

    let series = pieces
        .into_iter()
        .filter(|p| p.len() >= 2)
        .map(|p| {
            let mut steps = Vec::with_capacity(p.len() - 1);
            let mut turns = Vec::with_capacity(p.len() - 1);
            let mut prev_heading: Option<f64> = None;
            for w in p.windows(2) {
                let (a, b) = ((w[0].x, w[0].y), (w[1].x, w[1].y));
                let len = (b.0 - a.0).hypot(b.1 - a.1);
                let heading = (len > 0.0).then(|| bearing(a, b));
                turns.push(match (prev_heading, heading) {
                    (Some(h0), Some(h1)) => Some(wrap_angle(h1 - h0)),
                    _ => None,
                });
                steps.push((len / 1000.0).max(MIN_STEP_KM));
                prev_heading = heading;
            }
            StepSeries::new(steps, turns)
        })
        .collect();
    Ok(series)
}

pub fn extract_steps(track: &RelocationTrack) -> Result<Vec<StepSeries>, CalibrationError> {
    extract_steps_with(track, NOMINAL_INTERVAL_S)
}
