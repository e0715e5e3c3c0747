use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// A point table row plus whatever else was on the line.
pub struct PointTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub points: Vec<(f64, f64)>,
}

fn column(headers: &[String], names: &[&str]) -> Option<usize> {
    headers
        .iter()
        .position(|h| names.iter().any(|n| h.trim().eq_ignore_ascii_case(n)))
}

/// Reads a CSV with `x`/`y` (or `easting`/`northing`) columns. When `kind`
/// is given, only rows whose `kind` column matches are kept.
pub fn read_points(path: &Path, kind: Option<&str>) -> Result<PointTable, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::io(path.display(), e))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::io(path.display(), e))?
        .iter()
        .map(str::to_string)
        .collect();
    let missing = |what: &str| CliError::Io(format!("{}: no {what} column", path.display()));
    let xi = column(&headers, &["x", "easting"]).ok_or_else(|| missing("x"))?;
    let yi = column(&headers, &["y", "northing"]).ok_or_else(|| missing("y"))?;
    let ki = match kind {
        Some(_) => Some(column(&headers, &["kind"]).ok_or_else(|| missing("kind"))?),
        None => None,
    };
    let mut table = PointTable {
        headers,
        rows: Vec::new(),
        points: Vec::new(),
    };
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::io(path.display(), e))?;
        if let (Some(k), Some(i)) = (kind, ki) {
            if record.get(i) != Some(k) {
                continue;
            }
        }
        let num = |i: usize| -> Result<f64, CliError> {
            record
                .get(i)
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|e| CliError::Io(format!("{}: line {}: {e}", path.display(), line + 2)))
        };
        table.points.push((num(xi)?, num(yi)?));
        table.rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(table)
}

/// Trajectory files of a simulation output directory, in replicate order.
pub fn trajectory_files(runs: &Path) -> Result<Vec<PathBuf>, CliError> {
    let dir = runs.join("trajectories");
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| CliError::io(dir.display(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Io(format!("{}: no trajectory files", dir.display())));
    }
    Ok(files)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent.display(), e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path.display(), e))
}

/// Pretty JSON to `out`, or stdout when no path is given.
pub fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))? + "\n";
    match out {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn csv_writer(out: Option<&Path>) -> Result<csv::Writer<Box<dyn std::io::Write>>, CliError> {
    let sink: Box<dyn std::io::Write> = match out {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| CliError::io(parent.display(), e))?;
            }
            Box::new(fs::File::create(p).map_err(|e| CliError::io(p.display(), e))?)
        }
        None => Box::new(std::io::stdout()),
    };
    Ok(csv::Writer::from_writer(sink))
}
