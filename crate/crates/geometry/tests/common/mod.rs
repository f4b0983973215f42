#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use moellerlab_geometry::*;
use moellerlab_lattice::{make_grid, SpacetimeGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_grid() -> SpacetimeGrid {
    make_grid(4, 4, 0.0, 1.0, 1.0, 1).unwrap()
}

pub fn random_arc(r: &mut ChaCha8Rng) -> Arc {
    Arc { center: r.random_range(-PI..PI), half_width: r.random_range(0.1..1.3) }
}

/// A pair of future arcs with the first strictly inside the second.
pub fn nested_arcs(r: &mut ChaCha8Rng) -> (Arc, Arc) {
    let outer = Arc { center: r.random_range(-PI..PI), half_width: r.random_range(0.3..FRAC_PI_2 - 0.05) };
    let hw = r.random_range(0.05..outer.half_width - 0.02);
    let slack = outer.half_width - hw - 0.01;
    let inner = Arc { center: outer.center + r.random_range(-slack..slack), half_width: hw };
    (inner, outer)
}

pub fn tensor_for(arc: Arc, r: &mut ChaCha8Rng) -> SymTensor2 {
    SymTensor2::from_arc(arc).scale(r.random_range(0.5..2.0))
}

pub fn field_from_arcs(grid: &SpacetimeGrid, arcs: &[Arc], r: &mut ChaCha8Rng) -> MetricField {
    let comps = arcs.iter().map(|a| tensor_for(*a, r)).collect();
    let orient = arcs.iter().map(|a| TangentVector::from_angle(a.center)).collect();
    MetricField::new(grid, comps, orient).unwrap()
}

pub fn random_metric(grid: &SpacetimeGrid, r: &mut ChaCha8Rng) -> MetricField {
    let arcs: Vec<Arc> = (0..grid.points()).map(|_| random_arc(r)).collect();
    field_from_arcs(grid, &arcs, r)
}

/// `(g, g')` with `g ⪯ g'` and aligned futures at every point.
pub fn comparable_pair(grid: &SpacetimeGrid, r: &mut ChaCha8Rng) -> (MetricField, MetricField) {
    let (inner, outer): (Vec<Arc>, Vec<Arc>) = (0..grid.points()).map(|_| nested_arcs(r)).unzip();
    (field_from_arcs(grid, &inner, r), field_from_arcs(grid, &outer, r))
}

/// Dense sampling oracle: every sampled direction that is `g`-timelike
/// is `g'`-causal.
pub fn sampled_inclusion(g: &SymTensor2, g2: &SymTensor2, samples: usize) -> bool {
    (0..samples).all(|k| {
        let v = TangentVector::from_angle(2.0 * PI * k as f64 / samples as f64);
        let q = g.norm2(v) / g.det().abs().sqrt();
        let q2 = g2.norm2(v) / g2.det().abs().sqrt();
        !(q < -1e-9) || q2 <= 1e-9
    })
}
