use rand::Rng;
use serde::{Deserialize, Serialize};

use super::EnvironmentError;
use crate::terrain::{LandUseClass, RasterGrid};

/// Survey categories of a plantation cell, by share of rubber canopy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AgriCategory {
    None,
    HomeGarden,
    Rubber0To25,
    Rubber25To50,
    Rubber50To75,
    Rubber75To100,
    Rubber100,
}

impl AgriCategory {
    pub const ALL: [AgriCategory; 7] = [
        AgriCategory::None,
        AgriCategory::HomeGarden,
        AgriCategory::Rubber0To25,
        AgriCategory::Rubber25To50,
        AgriCategory::Rubber50To75,
        AgriCategory::Rubber75To100,
        AgriCategory::Rubber100,
    ];

    /// Probability that a cell of this category is a home garden: the
    /// midpoint of the non-rubber share of the category's canopy band.
    pub fn home_garden_probability(self) -> f64 {
        let band = |lo: f64, hi: f64| 1.0 - (lo + hi) / 200.0;
        match self {
            AgriCategory::None | AgriCategory::Rubber100 => 0.0,
            AgriCategory::HomeGarden => 1.0,
            AgriCategory::Rubber0To25 => band(0.0, 25.0),
            AgriCategory::Rubber25To50 => band(25.0, 50.0),
            AgriCategory::Rubber50To75 => band(50.0, 75.0),
            AgriCategory::Rubber75To100 => band(75.0, 100.0),
        }
    }
}

/// Area share of each category over the plantation cells, in
/// [`AgriCategory::ALL`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgriShares(pub [f64; 7]);

impl Default for AgriShares {
    /// The three dominant survey categories (75-100 %, 50-75 % and 25-50 %
    /// rubber) at their surveyed shares; the minor remainder is split so the
    /// expected home-garden share is about 35 %.
    fn default() -> Self {
        AgriShares([0.04, 0.04, 0.07, 0.157, 0.296, 0.369, 0.028])
    }
}

impl AgriShares {
    pub fn only(category: AgriCategory) -> Self {
        let mut s = [0.0; 7];
        s[AgriCategory::ALL.iter().position(|c| *c == category).unwrap()] = 1.0;
        AgriShares(s)
    }

    pub fn validate(&self) -> Result<(), EnvironmentError> {
        let sum: f64 = self.0.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || self.0.iter().any(|s| *s < 0.0) {
            return Err(EnvironmentError::SharesSum(sum));
        }
        Ok(())
    }

    pub fn expected_home_garden_share(&self) -> f64 {
        self.0
            .iter()
            .zip(AgriCategory::ALL)
            .map(|(s, c)| s * c.home_garden_probability())
            .sum()
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> AgriCategory {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (s, c) in self.0.iter().zip(AgriCategory::ALL) {
            acc += s;
            if u < acc {
                return c;
            }
        }
        // rounding slack lands in the last category with nonzero share
        AgriCategory::ALL[self.0.iter().rposition(|s| *s > 0.0).unwrap_or(6)]
    }
}

/// Binary home-garden mask over the plantation cells of a land-use grid.
pub fn assign_agri_plots<R: Rng + ?Sized>(
    landuse: &RasterGrid,
    shares: &AgriShares,
    rng: &mut R,
) -> Result<RasterGrid, EnvironmentError> {
    shares.validate()?;
    let mut out = RasterGrid::filled(landuse.header.clone(), 0.0);
    for (idx, v) in landuse.values.iter().enumerate() {
        if !LandUseClass::from_value(*v)?.is_plantation() {
            continue;
        }
        let category = shares.draw(rng);
        if rng.random::<f64>() < category.home_garden_probability() {
            out.values[idx] = 1.0;
        }
    }
    Ok(out)
}
