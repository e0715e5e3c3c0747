use serde::{Deserialize, Serialize};

use super::TerrainError;

/// The 19 land-use/land-cover classes, encoded 0..=18 in the raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LandUseClass {
    DeciduousBroadleafForest = 0,
    Cropland = 1,
    BuiltUpLand = 2,
    MixedForest = 3,
    Shrubland = 4,
    BarrenLand = 5,
    FallowLand = 6,
    Wasteland = 7,
    WaterBodies = 8,
    Plantations = 9,
    Aquaculture = 10,
    MangroveForest = 11,
    SaltPan = 12,
    Grassland = 13,
    EvergreenBroadleafForest = 14,
    DeciduousNeedleleafForest = 15,
    PermanentWetlands = 16,
    SnowAndIce = 17,
    EvergreenNeedleleafForest = 18,
}

impl LandUseClass {
    pub const ALL: [LandUseClass; 19] = [
        LandUseClass::DeciduousBroadleafForest,
        LandUseClass::Cropland,
        LandUseClass::BuiltUpLand,
        LandUseClass::MixedForest,
        LandUseClass::Shrubland,
        LandUseClass::BarrenLand,
        LandUseClass::FallowLand,
        LandUseClass::Wasteland,
        LandUseClass::WaterBodies,
        LandUseClass::Plantations,
        LandUseClass::Aquaculture,
        LandUseClass::MangroveForest,
        LandUseClass::SaltPan,
        LandUseClass::Grassland,
        LandUseClass::EvergreenBroadleafForest,
        LandUseClass::DeciduousNeedleleafForest,
        LandUseClass::PermanentWetlands,
        LandUseClass::SnowAndIce,
        LandUseClass::EvergreenNeedleleafForest,
    ];

    pub fn from_code(code: i64) -> Result<Self, TerrainError> {
        usize::try_from(code)
            .ok()
            .and_then(|c| Self::ALL.get(c).copied())
            .ok_or(TerrainError::LandUseCode(code))
    }

    /// Decode a raster value; values must be integral.
    pub fn from_value(v: f64) -> Result<Self, TerrainError> {
        if v.fract() != 0.0 || !v.is_finite() {
            return Err(TerrainError::LandUseCode(v as i64));
        }
        Self::from_code(v as i64)
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    /// Evergreen broadleaf, deciduous broadleaf and mixed forest form the
    /// forest land the elephant forages in and retreats to.
    pub fn is_forest(self) -> bool {
        matches!(
            self,
            LandUseClass::EvergreenBroadleafForest | LandUseClass::DeciduousBroadleafForest | LandUseClass::MixedForest
        )
    }

    /// Cultivated land where humans disturb the elephant and plots can be raided.
    pub fn is_plantation(self) -> bool {
        matches!(self, LandUseClass::Plantations | LandUseClass::Cropland)
    }

    pub fn is_water(self) -> bool {
        self == LandUseClass::WaterBodies
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip_and_reject_out_of_range() {
        for (i, c) in LandUseClass::ALL.iter().enumerate() {
            assert_eq!(c.code() as usize, i);
            assert_eq!(LandUseClass::from_code(i as i64).unwrap(), *c);
        }
        assert!(LandUseClass::from_code(19).is_err());
        assert!(LandUseClass::from_code(-1).is_err());
        assert!(LandUseClass::from_value(2.5).is_err());
    }

    #[test]
    fn three_forest_classes() {
        let forest: Vec<_> = LandUseClass::ALL.iter().filter(|c| c.is_forest()).collect();
        assert_eq!(forest.len(), 3);
    }
}
