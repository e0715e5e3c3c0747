use std::f64::consts::{FRAC_PI_4, PI};

use crate::terrain::RasterGrid;

/// The eight compass directions, clockwise from north.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::N,
        Direction::NE,
        Direction::E,
        Direction::SE,
        Direction::S,
        Direction::SW,
        Direction::W,
        Direction::NW,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Compass bearing in radians.
    pub fn bearing(self) -> f64 {
        self.index() as f64 * FRAC_PI_4
    }

    /// (column, row) step; rows grow southward.
    pub fn offset(self) -> (i64, i64) {
        match self {
            Direction::N => (0, -1),
            Direction::NE => (1, -1),
            Direction::E => (1, 0),
            Direction::SE => (1, 1),
            Direction::S => (0, 1),
            Direction::SW => (-1, 1),
            Direction::W => (-1, 0),
            Direction::NW => (-1, -1),
        }
    }

    /// The 45-degree sector containing a compass bearing.
    pub fn of_bearing(b: f64) -> Direction {
        let k = (b.rem_euclid(2.0 * PI) / FRAC_PI_4).round() as usize % 8;
        Direction::ALL[k]
    }
}

/// Movement cost of each direction out of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionCosts(pub [f64; 8]);

impl DirectionCosts {
    /// Sum, along each ray of up to `radius / cellsize` cells, of the slope
    /// of every cell steeper than `slope_limit`. A ray that leaves the grid
    /// immediately costs infinity.
    pub fn compute(slope: &RasterGrid, row: usize, col: usize, radius: f64, slope_limit: f64) -> Self {
        let h = &slope.header;
        let reach = (radius / h.cellsize).floor().max(1.0) as i64;
        let mut costs = [0.0; 8];
        for d in Direction::ALL {
            let (dc, dr) = d.offset();
            let mut cost = 0.0;
            for k in 1..=reach {
                let r = row as i64 + k * dr;
                let c = col as i64 + k * dc;
                if r < 0 || c < 0 || r >= h.nrows as i64 || c >= h.ncols as i64 {
                    if k == 1 {
                        cost = f64::INFINITY;
                    }
                    break;
                }
                let s = slope.get(r as usize, c as usize);
                if s > slope_limit {
                    cost += s;
                }
            }
            costs[d.index()] = cost;
        }
        Self(costs)
    }

    pub fn cost(&self, d: Direction) -> f64 {
        self.0[d.index()]
    }

    /// Directions whose cost is below `tolerance`; when none qualifies,
    /// the single cheapest direction.
    pub fn feasible(&self, tolerance: f64) -> DirectionSet {
        let mut set = DirectionSet::EMPTY;
        for d in Direction::ALL {
            if self.cost(d) < tolerance {
                set.insert(d);
            }
        }
        if set.is_empty() {
            let best = Direction::ALL
                .into_iter()
                .min_by(|a, b| self.cost(*a).total_cmp(&self.cost(*b)))
                .expect("eight directions");
            set.insert(best);
        }
        set
    }
}

/// Bit set over [`Direction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DirectionSet(u8);

impl DirectionSet {
    pub const EMPTY: DirectionSet = DirectionSet(0);
    pub const ALL: DirectionSet = DirectionSet(0xff);

    pub fn insert(&mut self, d: Direction) {
        self.0 |= 1 << d.index();
    }

    pub fn contains(&self, d: Direction) -> bool {
        self.0 & (1 << d.index()) != 0
    }

    pub fn contains_bearing(&self, b: f64) -> bool {
        self.contains(Direction::of_bearing(b))
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Direction> + '_ {
        Direction::ALL.into_iter().filter(|d| self.contains(*d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terrain::GridHeader;
    use proptest::prelude::*;

    fn flat(n: usize) -> RasterGrid {
        RasterGrid::filled(GridHeader::new(n, n, 0.0, 0.0, 30.0), 0.0)
    }

    #[test]
    fn flat_is_fully_feasible() {
        let g = flat(61);
        let costs = DirectionCosts::compute(&g, 30, 30, 750.0, 30.0);
        assert_eq!(costs.feasible(100.0), DirectionSet::ALL);
    }

    #[test]
    fn only_steep_cells_count() {
        let mut g = flat(61);
        // east ray: 35, 40, 45 -> 120
        for (k, s) in [35.0, 40.0, 45.0].into_iter().enumerate() {
            g.set(30, 32 + k * 3, s);
        }
        // north ray: 35, 10, 40 -> 75
        for (k, s) in [35.0, 10.0, 40.0].into_iter().enumerate() {
            g.set(28 - k * 4, 30, s);
        }
        let costs = DirectionCosts::compute(&g, 30, 30, 750.0, 30.0);
        assert_eq!(costs.cost(Direction::E), 120.0);
        assert_eq!(costs.cost(Direction::N), 75.0);
        let f = costs.feasible(100.0);
        assert!(!f.contains(Direction::E));
        assert!(f.contains(Direction::N));
        assert_eq!(f.len(), 7);
    }

    #[test]
    fn edge_and_fallback() {
        let g = flat(30);
        let costs = DirectionCosts::compute(&g, 0, 0, 750.0, 30.0);
        let f = costs.feasible(100.0);
        assert_eq!(
            f.iter().collect::<Vec<_>>(),
            vec![Direction::E, Direction::SE, Direction::S]
        );

        let mut steep = RasterGrid::filled(GridHeader::new(30, 30, 0.0, 0.0, 30.0), 60.0);
        steep.set(15, 16, 0.0);
        let costs = DirectionCosts::compute(&steep, 15, 15, 750.0, 30.0);
        let f = costs.feasible(100.0);
        // the east ray is cheapest because its first cell is flat
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![Direction::E]);
    }

    #[test]
    fn sectors() {
        assert_eq!(Direction::of_bearing(0.1), Direction::N);
        assert_eq!(Direction::of_bearing(-0.1), Direction::N);
        assert_eq!(Direction::of_bearing(PI / 2.0), Direction::E);
        assert_eq!(Direction::of_bearing(-3.0 * PI / 4.0), Direction::SW);
        for d in Direction::ALL {
            assert_eq!(Direction::of_bearing(d.bearing()), d);
        }
    }

    proptest! {
        #[test]
        fn feasible_never_empty(values in proptest::collection::vec(0.0f64..90.0, 100), r in 0usize..10, c in 0usize..10, tol in 1.0f64..300.0) {
            let g = RasterGrid::from_values(GridHeader::new(10, 10, 0.0, 0.0, 30.0), values).unwrap();
            let costs = DirectionCosts::compute(&g, r, c, 750.0, 30.0);
            let f = costs.feasible(tol);
            prop_assert!(!f.is_empty());
            for d in f.iter() {
                prop_assert!(costs.cost(d) < tol || f.len() == 1);
            }
        }

        #[test]
        fn larger_tolerance_is_superset(values in proptest::collection::vec(0.0f64..90.0, 100), t1 in 1.0f64..300.0, t2 in 1.0f64..300.0) {
            let g = RasterGrid::from_values(GridHeader::new(10, 10, 0.0, 0.0, 30.0), values).unwrap();
            let costs = DirectionCosts::compute(&g, 5, 5, 750.0, 30.0);
            let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
            let wide = costs.feasible(hi);
            for d in Direction::ALL.into_iter().filter(|d| costs.cost(*d) < lo) {
                prop_assert!(wide.contains(d));
            }
        }
    }
}
