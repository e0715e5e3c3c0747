use rand::seq::index::sample;
use rand::Rng;

use crate::environment::FoodGrid;
use crate::terrain::TerrainStack;

/// The agent's knowledge of food locations. Water knowledge is complete and
/// read straight from the terrain, so only food is stored here.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryMatrix {
    known: Vec<Option<f64>>,
}

impl MemoryMatrix {
    pub fn empty(len: usize) -> Self {
        Self { known: vec![None; len] }
    }

    /// Remembers a uniformly random `fraction` of the food-bearing forest
    /// cells plus every home garden within `fringe` metres of the forest.
    pub fn initialise<R: Rng + ?Sized>(
        stack: &TerrainStack,
        food: &FoodGrid,
        fraction: f64,
        fringe: f64,
        rng: &mut R,
    ) -> Self {
        let mut mem = Self::empty(food.len());
        let forest: Vec<usize> = (0..food.len())
            .filter(|i| stack.is_forest(*i) && food.get(*i) > 0.0)
            .collect();
        let k = (fraction * forest.len() as f64).round() as usize;
        let mut picked: Vec<usize> = sample(rng, forest.len(), k).into_iter().map(|j| forest[j]).collect();
        picked.sort_unstable();
        for i in picked {
            mem.known[i] = Some(food.get(i));
        }
        for i in 0..food.len() {
            if stack.is_agri_plot(i) && stack.proximity_forest.values[i] <= fringe {
                mem.known[i] = Some(food.get(i));
            }
        }
        mem
    }

    pub fn get(&self, cell: usize) -> Option<f64> {
        self.known[cell]
    }

    pub fn remember(&mut self, cell: usize, kg: f64) {
        self.known[cell] = Some(kg);
    }

    /// Mirrors a landscape change on a remembered cell; unknown cells stay unknown.
    pub fn sync(&mut self, cell: usize, kg: f64) {
        if let Some(v) = self.known[cell].as_mut() {
            *v = kg;
        }
    }

    pub fn known_count(&self) -> usize {
        self.known.iter().filter(|v| v.is_some()).count()
    }

    pub fn iter_known(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.known.iter().enumerate().filter_map(|(i, v)| v.map(|kg| (i, kg)))
    }
}
