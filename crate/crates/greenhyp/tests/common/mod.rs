#![allow(dead_code)]

use moellerlab_geometry::MetricField;
use moellerlab_greenhyp::{build_operator, GreenSystem, HyperbolicOperator, LowerOrder};
use moellerlab_lattice::{make_grid, FiberMetric, MatrixField, Range, ScalarField, Section, SpacetimeGrid};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `nt × nx` window `[0, 0.5·(nt−1)·dx]` on the circle of length 2π, so
/// that `dt = dx/2`.
pub fn grid(nt: usize, nx: usize, rank: usize) -> SpacetimeGrid {
    let dx = 2.0 * PI / nx as f64;
    make_grid(nt, nx, 0.0, 0.5 * dx * (nt - 1) as f64, 2.0 * PI, rank).unwrap()
}

pub fn klein_gordon(grid: &SpacetimeGrid, mass: f64) -> HyperbolicOperator {
    let metric = MetricField::minkowski(&grid.with_rank(1).unwrap());
    build_operator(&metric, &LowerOrder::klein_gordon(grid, mass), &FiberMetric::identity(grid)).unwrap()
}

/// Static but spatially varying lapse and spatial metric.
pub fn curved_metric(grid: &SpacetimeGrid) -> MetricField {
    let g1 = grid.with_rank(1).unwrap();
    let lapse = ScalarField::from_fn(&g1, Range::Positive, |t, x| 1.0 + 0.2 * x.sin() + 0.1 * (0.7 * t).cos()).unwrap();
    let spatial = ScalarField::from_fn(&g1, Range::Positive, |t, x| 1.3 + 0.25 * (2.0 * x).cos() * (1.0 + 0.2 * t)).unwrap();
    MetricField::from_split(&lapse, &spatial).unwrap()
}

pub fn random_matrix_field(grid: &SpacetimeGrid, rng: &mut impl Rng, scale: f64) -> MatrixField {
    let r = grid.rank;
    let blocks = (0..grid.points()).map(|_| DMatrix::from_fn(r, r, |_, _| scale * rng.random_range(-1.0..1.0))).collect();
    MatrixField::new(grid, blocks).unwrap()
}

/// Random operator with first-order terms on a curved metric.
pub fn random_operator(grid: &SpacetimeGrid, rng: &mut impl Rng) -> HyperbolicOperator {
    let lower = LowerOrder {
        time: random_matrix_field(grid, rng, 0.5),
        space: random_matrix_field(grid, rng, 0.5),
        potential: random_matrix_field(grid, rng, 1.0),
    };
    build_operator(&curved_metric(grid), &lower, &FiberMetric::identity(grid)).unwrap()
}

/// Random values on levels `first..=last`, zero elsewhere.
pub fn random_section(grid: &SpacetimeGrid, rng: &mut impl Rng, first: usize, last: usize) -> Section {
    Section::from_fn(grid, |t, _, _| {
        let n = grid.level_of(t);
        if n >= first && n <= last {
            rng.random_range(-1.0..1.0)
        } else {
            0.0
        }
    })
}

/// Random section vanishing on the first three and last three levels, so
/// that its image under `N` is still admissible for the checked solves.
pub fn compact_section(grid: &SpacetimeGrid, rng: &mut impl Rng) -> Section {
    random_section(grid, rng, 3, grid.nt - 4)
}

pub fn system(op: &HyperbolicOperator) -> GreenSystem {
    GreenSystem::new(op).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Largest entry of `a − b` restricted to interior time levels.
pub fn interior_diff(grid: &SpacetimeGrid, a: &[f64], b: &[f64]) -> f64 {
    let m = grid.nx * grid.rank;
    max_abs_diff(&a[m..a.len() - m], &b[m..b.len() - m])
}
