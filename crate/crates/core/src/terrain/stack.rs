use super::{compute_slope, distance_transform, LandUseClass, RasterGrid, TerrainError};

/// All static layers of one landscape, sharing a single header.
#[derive(Debug, Clone)]
pub struct TerrainStack {
    pub elevation: RasterGrid,
    pub slope: RasterGrid,
    pub landuse: RasterGrid,
    pub water: RasterGrid,
    pub forest: RasterGrid,
    pub plantation: RasterGrid,
    /// Distance (m) to the nearest plantation cell; `+inf` if the landscape has none.
    pub proximity_plantation: RasterGrid,
    pub proximity_forest: RasterGrid,
    pub proximity_water: RasterGrid,
    pub buildings: RasterGrid,
    /// Home-garden plots; all zero until assigned by the environment.
    pub agri_plots: RasterGrid,
    classes: Vec<LandUseClass>,
}

impl TerrainStack {
    pub fn header(&self) -> &super::GridHeader {
        &self.elevation.header
    }

    pub fn class_at(&self, idx: usize) -> LandUseClass {
        self.classes[idx]
    }

    pub fn is_forest(&self, idx: usize) -> bool {
        self.classes[idx].is_forest()
    }

    pub fn is_plantation(&self, idx: usize) -> bool {
        self.classes[idx].is_plantation()
    }

    pub fn is_water(&self, idx: usize) -> bool {
        self.classes[idx].is_water()
    }

    pub fn is_building(&self, idx: usize) -> bool {
        self.buildings.is_set(idx)
    }

    pub fn is_agri_plot(&self, idx: usize) -> bool {
        self.agri_plots.is_set(idx)
    }

    pub fn with_agri_plots(mut self, plots: RasterGrid) -> Result<Self, TerrainError> {
        self.header().check_same(&plots.header, "agri_plots")?;
        self.agri_plots = plots;
        Ok(self)
    }
}

fn proximity(mask: &RasterGrid) -> Result<RasterGrid, TerrainError> {
    if mask.count_set() == 0 {
        Ok(RasterGrid::filled(mask.header.clone(), f64::INFINITY))
    } else {
        distance_transform(mask)
    }
}

/// Derive slope, masks and proximity maps from the three input layers.
pub fn build_stack(
    elevation: RasterGrid,
    landuse: RasterGrid,
    buildings: RasterGrid,
) -> Result<TerrainStack, TerrainError> {
    elevation.header.check_same(&landuse.header, "landuse")?;
    elevation.header.check_same(&buildings.header, "buildings")?;
    let classes = landuse
        .values
        .iter()
        .map(|v| LandUseClass::from_value(*v))
        .collect::<Result<Vec<_>, _>>()?;
    let header = elevation.header.clone();
    let mask = |pred: fn(LandUseClass) -> bool| RasterGrid {
        header: header.clone(),
        values: classes.iter().map(|c| if pred(*c) { 1.0 } else { 0.0 }).collect(),
    };
    let water = mask(LandUseClass::is_water);
    let forest = mask(LandUseClass::is_forest);
    let plantation = mask(LandUseClass::is_plantation);
    let slope = compute_slope(&elevation)?;
    let proximity_plantation = proximity(&plantation)?;
    let proximity_forest = proximity(&forest)?;
    let proximity_water = proximity(&water)?;
    let buildings = buildings.mask_where(|v| v != 0.0);
    let agri_plots = RasterGrid::filled(header, 0.0);
    Ok(TerrainStack {
        elevation,
        slope,
        landuse,
        water,
        forest,
        plantation,
        proximity_plantation,
        proximity_forest,
        proximity_water,
        buildings,
        agri_plots,
        classes,
    })
}
