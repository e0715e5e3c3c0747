use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{assign_agri_plots, AgriShares, EnvironmentError};
use crate::terrain::{build_stack, GridHeader, LandUseClass, RasterGrid, TerrainStack};

/// Parameters of a generated forest/plantation landscape.
///
/// Layout, west to east: forest with a meandering north-south river, a
/// north-south ridge with a pass, more forest, then a plantation strip along
/// the eastern edge holding home gardens and scattered buildings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SyntheticSpec {
    pub nrows: usize,
    pub ncols: usize,
    pub cellsize: f64,
    pub xll: f64,
    pub yll: f64,
    /// Fraction of columns (eastern side) that are plantation.
    pub plantation_share: f64,
    /// River column as a fraction of the grid width.
    pub river_col_fraction: f64,
    /// Ridge crest column as a fraction of the grid width.
    pub ridge_col_fraction: f64,
    /// Crest height (m) above the base surface; 0 disables the ridge.
    pub ridge_height: f64,
    /// e-folding half-width (m) of the ridge cross-section.
    pub ridge_halfwidth: f64,
    /// Fraction of rows, centred on the middle row, where the ridge is breached.
    pub pass_fraction: f64,
    pub base_elevation: f64,
    /// Probability that a plantation cell carries a building.
    pub building_probability: f64,
    pub agri_shares: AgriShares,
    /// Suggested start as grid fractions (column, row from north).
    pub start_col_fraction: f64,
    pub start_row_fraction: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            nrows: 120,
            ncols: 160,
            cellsize: 30.0,
            xll: 0.0,
            yll: 0.0,
            plantation_share: 0.3,
            river_col_fraction: 0.2,
            ridge_col_fraction: 0.5,
            ridge_height: 300.0,
            ridge_halfwidth: 150.0,
            pass_fraction: 0.15,
            base_elevation: 600.0,
            building_probability: 0.03,
            agri_shares: AgriShares::default(),
            start_col_fraction: 0.35,
            start_row_fraction: 0.5,
            seed: 20100401,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticLandscape {
    /// Stack with home-garden plots already assigned.
    pub stack: TerrainStack,
    /// Suggested initial agent position (a forest cell centre).
    pub start: (f64, f64),
}

pub fn generate_synthetic_landscape(spec: &SyntheticSpec) -> Result<SyntheticLandscape, EnvironmentError> {
    let bad = |m: String| Err(EnvironmentError::Synthetic(m));
    if spec.nrows < 20 || spec.ncols < 20 {
        return bad(format!("{}x{} is below the 20x20 minimum", spec.nrows, spec.ncols));
    }
    if !(spec.cellsize > 0.0) {
        return bad(format!("cellsize {} must be > 0", spec.cellsize));
    }
    if !(0.0..1.0).contains(&spec.plantation_share) {
        return bad(format!("plantation_share {} not in [0, 1)", spec.plantation_share));
    }
    for (name, f) in [
        ("river_col_fraction", spec.river_col_fraction),
        ("ridge_col_fraction", spec.ridge_col_fraction),
        ("pass_fraction", spec.pass_fraction),
        ("start_col_fraction", spec.start_col_fraction),
        ("start_row_fraction", spec.start_row_fraction),
        ("building_probability", spec.building_probability),
    ] {
        if !(0.0..=1.0).contains(&f) {
            return bad(format!("{name} {f} not in [0, 1]"));
        }
    }
    if spec.ridge_height < 0.0 || !(spec.ridge_halfwidth > 0.0) {
        return bad("ridge_height must be >= 0 and ridge_halfwidth > 0".into());
    }

    let (nr, nc, cs) = (spec.nrows, spec.ncols, spec.cellsize);
    let header = GridHeader::new(nr, nc, spec.xll, spec.yll, cs);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let n_plant = (spec.plantation_share * nc as f64).round() as usize;
    let forest_cols = nc - n_plant;
    let forest = LandUseClass::EvergreenBroadleafForest.code() as f64;
    let mut landuse = RasterGrid::from_fn(header.clone(), |_, c| {
        if c >= forest_cols {
            LandUseClass::Plantations.code() as f64
        } else {
            forest
        }
    });

    if forest_cols >= 3 {
        let mut col = ((spec.river_col_fraction * nc as f64) as usize).clamp(1, forest_cols - 2);
        for r in 0..nr {
            landuse.set(r, col, LandUseClass::WaterBodies.code() as f64);
            let step: i32 = rng.random_range(-1..=1);
            let next = (col as i32 + step).clamp(1, forest_cols as i32 - 2) as usize;
            // keep the channel 4-connected when it shifts sideways
            if next != col && r + 1 < nr {
                landuse.set(r, next, LandUseClass::WaterBodies.code() as f64);
            }
            col = next;
        }
    }

    let crest_x = spec.ridge_col_fraction * nc as f64 * cs;
    let pass_half = spec.pass_fraction * nr as f64 * cs / 2.0;
    let mid_y = nr as f64 * cs / 2.0;
    // a 0.1 m per cell fall toward the east keeps the base well under 1 degree
    let tilt = 0.1 / cs;
    let elevation = RasterGrid::from_fn(header.clone(), |r, c| {
        let x = (c as f64 + 0.5) * cs;
        let y = (r as f64 + 0.5) * cs;
        let mut z = spec.base_elevation - tilt * x;
        if spec.ridge_height > 0.0 {
            let d = (x - crest_x) / spec.ridge_halfwidth;
            let along = ((y - mid_y).abs() - pass_half).max(0.0) / spec.ridge_halfwidth;
            let breach = 1.0 - (-along * along).exp();
            z += spec.ridge_height * (-d * d).exp() * breach;
        }
        z
    });

    let buildings = RasterGrid::from_fn(header.clone(), |_, c| {
        if c >= forest_cols && rng.random::<f64>() < spec.building_probability {
            1.0
        } else {
            0.0
        }
    });

    let plots = assign_agri_plots(&landuse, &spec.agri_shares, &mut rng)?;
    let stack = build_stack(elevation, landuse, buildings)?.with_agri_plots(plots)?;

    let start_c = ((spec.start_col_fraction * nc as f64) as usize).min(nc - 1);
    let start_r = ((spec.start_row_fraction * nr as f64) as usize).min(nr - 1);
    let start = nearest_forest_cell(&stack, start_r, start_c)
        .map(|i| header.index_center(i))
        .unwrap_or_else(|| header.cell_center(start_r, start_c));

    Ok(SyntheticLandscape { stack, start })
}

fn nearest_forest_cell(stack: &TerrainStack, row: usize, col: usize) -> Option<usize> {
    let h = stack.header();
    (0..h.len()).filter(|i| stack.is_forest(*i)).min_by_key(|i| {
        let (r, c) = h.row_col(*i);
        let dr = r as i64 - row as i64;
        let dc = c as i64 - col as i64;
        (dr * dr + dc * dc, *i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_without_ridge() {
        let spec = SyntheticSpec {
            ridge_height: 0.0,
            ..Default::default()
        };
        let land = generate_synthetic_landscape(&spec).unwrap();
        assert!(land.stack.slope.values.iter().all(|s| *s < 1.0));
    }

    #[test]
    fn ridge_flanks_exceed_30_degrees() {
        let land = generate_synthetic_landscape(&SyntheticSpec::default()).unwrap();
        let steep = land.stack.slope.values.iter().filter(|s| **s > 30.0).count();
        assert!(steep > 0);
        // the pass keeps the middle row passable
        let h = land.stack.header();
        let mid = h.nrows / 2;
        assert!((0..h.ncols).all(|c| land.stack.slope.get(mid, c) < 30.0));
    }

    #[test]
    fn plantation_share_is_respected() {
        let spec = SyntheticSpec {
            nrows: 50,
            ncols: 100,
            ..Default::default()
        };
        let land = generate_synthetic_landscape(&spec).unwrap();
        let frac = land.stack.plantation.count_set() as f64 / 5000.0;
        assert!((frac - 0.3).abs() <= 0.01, "{frac}");
        // home gardens only on plantation cells, river only in forest zone
        for i in 0..5000 {
            if land.stack.is_agri_plot(i) || land.stack.is_building(i) {
                assert!(land.stack.is_plantation(i));
            }
        }
        assert!(land.stack.water.count_set() >= 50);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_synthetic_landscape(&SyntheticSpec::default()).unwrap();
        let b = generate_synthetic_landscape(&SyntheticSpec::default()).unwrap();
        assert_eq!(a.stack.elevation, b.stack.elevation);
        assert_eq!(a.stack.landuse, b.stack.landuse);
        assert_eq!(a.stack.agri_plots, b.stack.agri_plots);
        assert_eq!(a.stack.buildings, b.stack.buildings);
        assert_eq!(a.start, b.start);
        let c = generate_synthetic_landscape(&SyntheticSpec {
            seed: 1,
            ..Default::default()
        })
        .unwrap();
        assert_ne!(a.stack.agri_plots, c.stack.agri_plots);
    }

    #[test]
    fn degenerate_dimensions_rejected() {
        let spec = SyntheticSpec {
            nrows: 10,
            ..Default::default()
        };
        assert!(matches!(
            generate_synthetic_landscape(&spec),
            Err(EnvironmentError::Synthetic(_))
        ));
    }

    #[test]
    fn start_is_forest() {
        let land = generate_synthetic_landscape(&SyntheticSpec::default()).unwrap();
        let idx = land.stack.header().index_of(land.start.0, land.start.1).unwrap();
        assert!(land.stack.is_forest(idx));
    }
}
