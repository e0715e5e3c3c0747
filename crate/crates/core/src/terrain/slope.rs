use super::{RasterGrid, TerrainError};

/// Slope in degrees using Horn's 3x3 weighted finite differences.
///
/// Neighbourhoods are clamped at the border: a missing neighbour takes the
/// value of the nearest in-grid cell.
pub fn compute_slope(elevation: &RasterGrid) -> Result<RasterGrid, TerrainError> {
    let h = &elevation.header;
    if h.nrows < 2 || h.ncols < 2 {
        return Err(TerrainError::TooSmall {
            nrows: h.nrows,
            ncols: h.ncols,
        });
    }
    let (nr, nc) = (h.nrows as isize, h.ncols as isize);
    let z = |r: isize, c: isize| -> f64 {
        let r = r.clamp(0, nr - 1) as usize;
        let c = c.clamp(0, nc - 1) as usize;
        elevation.get(r, c)
    };
    let denom = 8.0 * h.cellsize;
    Ok(RasterGrid::from_fn(h.clone(), |r, c| {
        let (r, c) = (r as isize, c as isize);
        // a b c / d e f / g h i, row r-1 is north
        let a = z(r - 1, c - 1);
        let b = z(r - 1, c);
        let cc = z(r - 1, c + 1);
        let d = z(r, c - 1);
        let f = z(r, c + 1);
        let g = z(r + 1, c - 1);
        let hh = z(r + 1, c);
        let i = z(r + 1, c + 1);
        let dzdx = ((cc + 2.0 * f + i) - (a + 2.0 * d + g)) / denom;
        let dzdy = ((a + 2.0 * b + cc) - (g + 2.0 * hh + i)) / denom;
        dzdx.hypot(dzdy).atan().to_degrees()
    }))
}
