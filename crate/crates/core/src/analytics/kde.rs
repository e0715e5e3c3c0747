use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::terrain::{GridHeader, RasterGrid};

type Point = (f64, f64);

/// Kernel support in bandwidths; the mass beyond is negligible.
const SUPPORT: f64 = 4.0;
/// Largest grid the automatic layout will build.
const MAX_CELLS: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelArea {
    pub level: f64,
    pub area_km2: f64,
}

fn sd(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    (values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Per-axis Silverman bandwidth for a bivariate Gaussian kernel.
pub fn silverman_bandwidth(points: &[Point]) -> Result<(f64, f64), AnalyticsError> {
    if points.len() < 10 {
        return Err(AnalyticsError::TooFewPoints {
            needed: 10,
            got: points.len(),
        });
    }
    let factor = (points.len() as f64).powf(-1.0 / 6.0);
    let hx = sd(points.iter().map(|p| p.0)) * factor;
    let hy = sd(points.iter().map(|p| p.1)) * factor;
    if !(hx > 0.0 && hy > 0.0) {
        return Err(AnalyticsError::Degenerate(
            "points have zero spread along an axis".into(),
        ));
    }
    Ok((hx, hy))
}

fn axis_weights(centre: f64, origin: f64, cellsize: f64, n: usize, h: f64) -> (usize, Vec<f64>) {
    let lo = ((centre - SUPPORT * h - origin) / cellsize).floor().max(0.0) as usize;
    let hi = (((centre + SUPPORT * h - origin) / cellsize).ceil().max(0.0) as usize).min(n);
    let w = (lo..hi)
        .map(|i| {
            let z = (origin + (i as f64 + 0.5) * cellsize - centre) / h;
            (-0.5 * z * z).exp()
        })
        .collect();
    (lo, w)
}

/// Gaussian product-kernel density on `header`, as cell masses summing to 1.
pub fn kde_grid(points: &[Point], header: &GridHeader, bandwidth: (f64, f64)) -> Result<RasterGrid, AnalyticsError> {
    let mut grid = RasterGrid::filled(header.clone(), 0.0);
    let (cs, nr, nc) = (header.cellsize, header.nrows, header.ncols);
    let top = header.yll + nr as f64 * cs;
    for p in points {
        let (c0, wx) = axis_weights(p.0, header.xll, cs, nc, bandwidth.0);
        // rows count down from the top edge
        let (r0, wy) = axis_weights(-p.1, -top, cs, nr, bandwidth.1);
        let norm: f64 = wx.iter().sum::<f64>() * wy.iter().sum::<f64>();
        if norm <= 0.0 {
            continue;
        }
        for (i, vy) in wy.iter().enumerate() {
            let row = (r0 + i) * nc;
            for (j, vx) in wx.iter().enumerate() {
                grid.values[row + c0 + j] += vy * vx / norm;
            }
        }
    }
    let total: f64 = grid.values.iter().sum();
    if !(total > 0.0) {
        return Err(AnalyticsError::Degenerate("no kernel mass falls on the grid".into()));
    }
    grid.values.iter_mut().for_each(|v| *v /= total);
    Ok(grid)
}

/// Grid covering the points plus the kernel support, at `cellsize` metres
/// (a fifth of the smaller bandwidth when absent).
pub fn kde_layout(points: &[Point], bandwidth: (f64, f64), cellsize: Option<f64>) -> GridHeader {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y0 = y0.min(p.1);
        y1 = y1.max(p.1);
    }
    let (px, py) = (SUPPORT * bandwidth.0, SUPPORT * bandwidth.1);
    let (w, h) = (x1 - x0 + 2.0 * px, y1 - y0 + 2.0 * py);
    let mut cs = cellsize.unwrap_or(bandwidth.0.min(bandwidth.1) / 5.0);
    if (w / cs).ceil() * (h / cs).ceil() > MAX_CELLS as f64 {
        cs = (w * h / MAX_CELLS as f64).sqrt() * 1.01;
    }
    let ncols = (w / cs).ceil() as usize;
    let nrows = (h / cs).ceil() as usize;
    GridHeader::new(nrows, ncols, x0 - px, y0 - py, cs)
}

/// Area (km²) of the cells above the smallest mass threshold enclosing
/// `level` of the total. Level 1 counts every cell with mass above machine
/// epsilon.
pub fn level_area(grid: &RasterGrid, level: f64) -> f64 {
    let cell_km2 = grid.header.cellsize.powi(2) / 1e6;
    if level >= 1.0 {
        return grid.values.iter().filter(|v| **v > f64::EPSILON).count() as f64 * cell_km2;
    }
    let mut sorted: Vec<f64> = grid.values.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = sorted.iter().sum();
    let mut acc = 0.0;
    let mut threshold = 0.0;
    for v in &sorted {
        acc += v;
        threshold = *v;
        if acc >= level * total {
            break;
        }
    }
    grid.values.iter().filter(|v| **v >= threshold && **v > 0.0).count() as f64 * cell_km2
}

/// KDE home-range areas for each level.
pub fn kde_area(points: &[Point], levels: &[f64], cellsize: Option<f64>) -> Result<Vec<LevelArea>, AnalyticsError> {
    let h = silverman_bandwidth(points)?;
    let grid = kde_grid(points, &kde_layout(points, h, cellsize), h)?;
    Ok(levels
        .iter()
        .map(|q| LevelArea {
            level: *q,
            area_km2: level_area(&grid, *q),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn gaussian(n: usize, sigma: f64, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Normal::new(0.0, sigma).unwrap();
        (0..n).map(|_| (d.sample(&mut rng), d.sample(&mut rng))).collect()
    }

    #[test]
    fn nested_levels() {
        let pts = gaussian(500, 800.0, 1);
        let a = kde_area(&pts, &[0.5, 0.9, 0.95, 1.0], None).unwrap();
        for w in a.windows(2) {
            assert!(w[0].area_km2 <= w[1].area_km2);
        }
    }

    #[test]
    fn gaussian_95_area() {
        let pts = gaussian(10_000, 1000.0, 2);
        let a = kde_area(&pts, &[0.95], None).unwrap()[0].area_km2;
        let analytic = std::f64::consts::PI * 2.4477f64.powi(2);
        assert!((a / analytic - 1.0).abs() < 0.15, "{a} vs {analytic}");
    }

    #[test]
    fn mass_above_threshold_is_close_to_level() {
        let pts = gaussian(300, 500.0, 3);
        let h = silverman_bandwidth(&pts).unwrap();
        let grid = kde_grid(&pts, &kde_layout(&pts, h, None), h).unwrap();
        assert!((grid.values.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let max_cell = grid.values.iter().cloned().fold(0.0, f64::max);
        for q in [0.5, 0.9, 0.95] {
            let cells = level_area(&grid, q) * 1e6 / grid.header.cellsize.powi(2);
            let mut sorted = grid.values.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let mass: f64 = sorted[..cells.round() as usize].iter().sum();
            assert!((mass - q).abs() <= max_cell + 1e-12, "{q}: {mass}");
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            kde_area(&[(1.0, 1.0); 20], &[0.95], None),
            Err(AnalyticsError::Degenerate(_))
        ));
        assert!(matches!(
            kde_area(&[(1.0, 1.0); 5], &[0.95], None),
            Err(AnalyticsError::TooFewPoints { .. })
        ));
    }
}
