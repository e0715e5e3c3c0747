use serde::{Deserialize, Serialize};

use super::TerrainError;

/// Georeferencing of a north-up raster in projected metres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub ncols: usize,
    pub nrows: usize,
    /// Western edge of the grid.
    pub xll: f64,
    /// Southern edge of the grid.
    pub yll: f64,
    pub cellsize: f64,
    pub nodata: Option<f64>,
}

impl GridHeader {
    pub fn new(nrows: usize, ncols: usize, xll: f64, yll: f64, cellsize: f64) -> Self {
        Self {
            ncols,
            nrows,
            xll,
            yll,
            cellsize,
            nodata: None,
        }
    }

    pub fn len(&self) -> usize {
        self.ncols * self.nrows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.ncols + col
    }

    pub fn row_col(&self, idx: usize) -> (usize, usize) {
        (idx / self.ncols, idx % self.ncols)
    }

    /// Centre of cell `(row, col)`; row 0 is the northernmost row.
    pub fn cell_center(&self, row: usize, col: usize) -> (f64, f64) {
        (
            self.xll + (col as f64 + 0.5) * self.cellsize,
            self.yll + (self.nrows as f64 - row as f64 - 0.5) * self.cellsize,
        )
    }

    pub fn index_center(&self, idx: usize) -> (f64, f64) {
        let (r, c) = self.row_col(idx);
        self.cell_center(r, c)
    }

    /// Cell containing the point, or `None` outside the grid extent.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let fc = (x - self.xll) / self.cellsize;
        let fr = (self.yll + self.nrows as f64 * self.cellsize - y) / self.cellsize;
        if !(fc >= 0.0 && fr >= 0.0) {
            return None;
        }
        let (c, r) = (fc.floor() as usize, fr.floor() as usize);
        (c < self.ncols && r < self.nrows).then_some((r, c))
    }

    pub fn index_of(&self, x: f64, y: f64) -> Option<usize> {
        self.cell_of(x, y).map(|(r, c)| self.index(r, c))
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.cell_of(x, y).is_some()
    }

    /// Equality of geometry, ignoring the nodata sentinel.
    pub fn same_geometry(&self, other: &GridHeader) -> bool {
        self.ncols == other.ncols
            && self.nrows == other.nrows
            && self.xll == other.xll
            && self.yll == other.yll
            && self.cellsize == other.cellsize
    }

    pub(crate) fn check_same(&self, other: &GridHeader, what: &str) -> Result<(), TerrainError> {
        if self.same_geometry(other) {
            Ok(())
        } else {
            Err(TerrainError::HeaderMismatch(format!(
                "{what}: {}x{} @ ({}, {}) cs {} vs {}x{} @ ({}, {}) cs {}",
                self.nrows,
                self.ncols,
                self.xll,
                self.yll,
                self.cellsize,
                other.nrows,
                other.ncols,
                other.xll,
                other.yll,
                other.cellsize
            )))
        }
    }
}

/// Row-major raster; row 0 is north.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasterGrid {
    pub header: GridHeader,
    pub values: Vec<f64>,
}

impl RasterGrid {
    pub fn filled(header: GridHeader, value: f64) -> Self {
        let values = vec![value; header.len()];
        Self { header, values }
    }

    pub fn from_values(header: GridHeader, values: Vec<f64>) -> Result<Self, TerrainError> {
        if values.len() != header.len() {
            return Err(TerrainError::PayloadCount {
                found: values.len(),
                expected: header.len(),
            });
        }
        Ok(Self { header, values })
    }

    /// Build a grid by evaluating `f(row, col)` for every cell.
    pub fn from_fn(header: GridHeader, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(header.len());
        for r in 0..header.nrows {
            for c in 0..header.ncols {
                values.push(f(r, c));
            }
        }
        Self { header, values }
    }

    pub fn nrows(&self) -> usize {
        self.header.nrows
    }

    pub fn ncols(&self) -> usize {
        self.header.ncols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[self.header.index(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        let idx = self.header.index(row, col);
        self.values[idx] = value;
    }

    /// Value at a projected point, `None` outside the extent.
    pub fn sample(&self, x: f64, y: f64) -> Option<f64> {
        self.header.index_of(x, y).map(|i| self.values[i])
    }

    /// Nonzero cells of a binary layer.
    pub fn is_set(&self, idx: usize) -> bool {
        self.values[idx] != 0.0
    }

    pub fn count_set(&self) -> usize {
        self.values.iter().filter(|v| **v != 0.0).count()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Binary grid (0/1) from a predicate over the values.
    pub fn mask_where(&self, pred: impl Fn(f64) -> bool) -> RasterGrid {
        RasterGrid {
            header: self.header.clone(),
            values: self.values.iter().map(|v| if pred(*v) { 1.0 } else { 0.0 }).collect(),
        }
    }
}
