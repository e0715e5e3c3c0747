use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BatchOutput, BatchSummary, EngineError};

const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub tick: u32,
    pub timestamp: String,
    pub x: f64,
    pub y: f64,
    pub mode: String,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRow {
    pub timestamp: String,
    pub kind: String,
    pub x: f64,
    pub y: f64,
}

fn csv_err(path: &Path, source: csv::Error) -> EngineError {
    EngineError::Csv {
        path: path.display().to_string(),
        source,
    }
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<(), EngineError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| EngineError::io(path, e))
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, EngineError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    r.deserialize().map(|row| row.map_err(|e| csv_err(path, e))).collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), EngineError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| EngineError::Json {
        path: path.display().to_string(),
        source: e,
    })?;
    fs::write(path, text + "\n").map_err(|e| EngineError::io(path, e))
}

/// Writes per-replicate trajectory, event and daily CSVs plus `summary.json`.
pub fn write_batch(dir: &Path, batch: &BatchOutput) -> Result<(), EngineError> {
    for sub in ["trajectories", "events", "daily"] {
        let p = dir.join(sub);
        fs::create_dir_all(&p).map_err(|e| EngineError::io(&p, e))?;
    }
    for rep in &batch.replicates {
        let name = format!("replicate_{:04}.csv", rep.index);
        let stamp = |tick| rep.timestamp(tick).format(TIMESTAMP_FORMAT).to_string();
        write_rows(
            &dir.join("trajectories").join(&name),
            rep.ticks.iter().map(|t| TrajectoryRow {
                tick: t.tick,
                timestamp: stamp(t.tick),
                x: t.x,
                y: t.y,
                mode: t.mode.as_str().to_string(),
                fitness: t.fitness,
            }),
        )?;
        write_rows(
            &dir.join("events").join(&name),
            rep.events.iter().map(|e| EventRow {
                timestamp: stamp(e.tick),
                kind: e.kind.as_str().to_string(),
                x: e.x,
                y: e.y,
            }),
        )?;
        write_rows(&dir.join("daily").join(&name), rep.summary.daily.iter())?;
    }
    write_json(&dir.join("summary.json"), &batch.summary)
}

pub fn read_trajectory_csv(path: &Path) -> Result<Vec<TrajectoryRow>, EngineError> {
    read_rows(path)
}

pub fn read_events_csv(path: &Path) -> Result<Vec<EventRow>, EngineError> {
    read_rows(path)
}

pub fn read_summary(path: &Path) -> Result<BatchSummary, EngineError> {
    let text = fs::read_to_string(path).map_err(|e| EngineError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| EngineError::Json {
        path: path.display().to_string(),
        source: e,
    })
}
