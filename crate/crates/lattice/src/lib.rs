//! Discretized cylinder spacetimes `[t_min, t_max] × S¹` and the data that
//! lives on them: vector-bundle sections, scalar fields, per-point matrix
//! fields, volume-weighted quadrature and smooth cutoff profiles.

mod error;
mod field;
mod grid;
mod io;
mod profile;
mod quadrature;
mod section;

pub use error::LatticeError;
pub use field::{FiberMetric, MatrixField, Range, ScalarField};
pub use grid::{make_grid, SpacetimeGrid};
pub use io::Envelope;
pub use profile::{smooth_step, step_profile};
pub use quadrature::weighted_inner_product;
pub use section::{Section, TimeWindow};
