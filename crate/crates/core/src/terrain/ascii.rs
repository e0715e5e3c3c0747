//! ESRI ASCII grid (`.asc`) reader and writer.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GridHeader, RasterGrid, TerrainError};

/// What replaces `NODATA_value` cells on load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NodataPolicy {
    /// Smallest valid value in the grid; avoids phantom cliffs in a DEM.
    #[default]
    GridMinimum,
    Value(f64),
}

pub fn load_ascii_grid(path: impl AsRef<Path>, policy: NodataPolicy) -> Result<RasterGrid, TerrainError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| TerrainError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_ascii_grid(&text, policy)
}

pub fn parse_ascii_grid(text: &str, policy: NodataPolicy) -> Result<RasterGrid, TerrainError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty()).peekable();

    let mut ncols = None;
    let mut nrows = None;
    let mut xll = None;
    let mut yll = None;
    let mut x_center = false;
    let mut y_center = false;
    let mut cellsize = None;
    let mut nodata = None;

    while let Some(line) = lines.peek() {
        // a header line is a keyword followed by a value; anything else is payload
        if line.split_whitespace().count() < 2 {
            break;
        }
        let mut parts = line.split_whitespace();
        let key = match parts.next() {
            Some(k) if k.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => k.to_ascii_lowercase(),
            _ => break,
        };
        let raw = parts
            .next()
            .ok_or_else(|| TerrainError::Header(format!("key {key} has no value")))?;
        if parts.next().is_some() {
            return Err(TerrainError::Header(format!("trailing tokens after {key}")));
        }
        let num = |s: &str| -> Result<f64, TerrainError> {
            s.parse::<f64>()
                .map_err(|_| TerrainError::Header(format!("value {s:?} for {key} is not numeric")))
        };
        let count = |s: &str| -> Result<usize, TerrainError> {
            s.parse::<usize>()
                .map_err(|_| TerrainError::Header(format!("value {s:?} for {key} is not a count")))
        };
        match key.as_str() {
            "ncols" => ncols = Some(count(raw)?),
            "nrows" => nrows = Some(count(raw)?),
            "xllcorner" => xll = Some(num(raw)?),
            "yllcorner" => yll = Some(num(raw)?),
            "xllcenter" => {
                xll = Some(num(raw)?);
                x_center = true;
            }
            "yllcenter" => {
                yll = Some(num(raw)?);
                y_center = true;
            }
            "cellsize" => cellsize = Some(num(raw)?),
            "nodata_value" => nodata = Some(num(raw)?),
            other => return Err(TerrainError::Header(format!("unknown header key {other:?}"))),
        }
        lines.next();
    }

    let missing = |k: &str| TerrainError::Header(format!("missing {k}"));
    let ncols = ncols.ok_or_else(|| missing("ncols"))?;
    let nrows = nrows.ok_or_else(|| missing("nrows"))?;
    let mut xll = xll.ok_or_else(|| missing("xllcorner"))?;
    let mut yll = yll.ok_or_else(|| missing("yllcorner"))?;
    let cellsize = cellsize.ok_or_else(|| missing("cellsize"))?;
    if ncols == 0 || nrows == 0 {
        return Err(TerrainError::Header("ncols and nrows must be positive".into()));
    }
    if !(cellsize > 0.0) {
        return Err(TerrainError::Header(format!("cellsize {cellsize} must be > 0")));
    }
    if x_center {
        xll -= cellsize / 2.0;
    }
    if y_center {
        yll -= cellsize / 2.0;
    }

    let mut values = Vec::with_capacity(ncols * nrows);
    let mut rows = 0;
    for (row, line) in lines.enumerate() {
        let before = values.len();
        for token in line.split_whitespace() {
            let v: f64 = token.parse().map_err(|_| TerrainError::Token {
                token: token.to_string(),
                row,
            })?;
            if v.is_nan() {
                return Err(TerrainError::Token {
                    token: token.to_string(),
                    row,
                });
            }
            values.push(v);
        }
        let found = values.len() - before;
        if found != ncols {
            return Err(TerrainError::RowLength {
                row,
                found,
                expected: ncols,
            });
        }
        rows += 1;
    }
    if rows != nrows {
        return Err(TerrainError::PayloadCount {
            found: values.len(),
            expected: ncols * nrows,
        });
    }

    if let Some(nd) = nodata {
        let fill = match policy {
            NodataPolicy::Value(v) => v,
            NodataPolicy::GridMinimum => {
                let m = values
                    .iter()
                    .copied()
                    .filter(|v| *v != nd)
                    .fold(f64::INFINITY, f64::min);
                if m.is_finite() {
                    m
                } else {
                    0.0
                }
            }
        };
        for v in values.iter_mut().filter(|v| **v == nd) {
            *v = fill;
        }
    }

    let header = GridHeader {
        ncols,
        nrows,
        xll,
        yll,
        cellsize,
        nodata,
    };
    RasterGrid::from_values(header, values)
}

/// Serialise to the ASCII grid text. Values use Rust's shortest round-trip
/// float formatting, so reloading reproduces them bit for bit.
pub fn format_ascii_grid(grid: &RasterGrid) -> String {
    let h = &grid.header;
    let mut out = String::new();
    let _ = writeln!(out, "ncols {}", h.ncols);
    let _ = writeln!(out, "nrows {}", h.nrows);
    let _ = writeln!(out, "xllcorner {:?}", h.xll);
    let _ = writeln!(out, "yllcorner {:?}", h.yll);
    let _ = writeln!(out, "cellsize {:?}", h.cellsize);
    if let Some(nd) = h.nodata {
        let _ = writeln!(out, "NODATA_value {nd:?}");
    }
    for row in grid.values.chunks(h.ncols) {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{v:?}");
        }
        out.push('\n');
    }
    out
}

pub fn write_ascii_grid(grid: &RasterGrid, path: impl AsRef<Path>) -> Result<(), TerrainError> {
    let path = path.as_ref();
    fs::write(path, format_ascii_grid(grid)).map_err(|source| TerrainError::Io {
        path: path.display().to_string(),
        source,
    })
}
