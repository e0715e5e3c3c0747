//! Static landscape layers at a common raster resolution.
//!
//! Everything here is built once per landscape and then shared read-only by
//! every replicate of a batch.

mod ascii;
mod distance;
mod grid;
mod landuse;
mod slope;
mod stack;

pub use ascii::{format_ascii_grid, load_ascii_grid, parse_ascii_grid, write_ascii_grid, NodataPolicy};
pub use distance::distance_transform;
pub use grid::{GridHeader, RasterGrid};
pub use landuse::LandUseClass;
pub use slope::compute_slope;
pub use stack::{build_stack, TerrainStack};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TerrainError {
    #[error("I/O error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed grid header: {0}")]
    Header(String),
    #[error("payload row {row} has {found} values, expected {expected}")]
    RowLength { row: usize, found: usize, expected: usize },
    #[error("payload holds {found} values, header declares {expected}")]
    PayloadCount { found: usize, expected: usize },
    #[error("unreadable value {token:?} at payload row {row}")]
    Token { token: String, row: usize },
    #[error("grid is {nrows}x{ncols}; at least 2x2 is required")]
    TooSmall { nrows: usize, ncols: usize },
    #[error("mask has no set cells")]
    EmptyMask,
    #[error("grid headers do not match: {0}")]
    HeaderMismatch(String),
    #[error("land-use code {0} outside 0..=18")]
    LandUseCode(i64),
}
