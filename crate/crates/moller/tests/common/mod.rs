#![allow(dead_code)]

use moellerlab_geometry::{metric_preset, LinkDirection, MetricField, ParacausalChain};
use moellerlab_lattice::{make_grid, SpacetimeGrid};
use std::f64::consts::PI;

/// `nt × nx` window `[0, 0.5·(nt−1)·dx]` on the circle of length 2π.
pub fn grid(nt: usize, nx: usize) -> SpacetimeGrid {
    let dx = 2.0 * PI / nx as f64;
    make_grid(nt, nx, 0.0, 0.5 * dx * (nt - 1) as f64, 2.0 * PI, 1).unwrap()
}

pub fn preset(name: &str, g: &SpacetimeGrid) -> MetricField {
    metric_preset(name, g).unwrap()
}

pub fn pair(g: &SpacetimeGrid, a: &str, b: &str) -> ParacausalChain {
    ParacausalChain::new(vec![preset(a, g), preset(b, g)], vec![LinkDirection::Forward]).unwrap()
}

pub fn flat_to_conformal(g: &SpacetimeGrid) -> ParacausalChain {
    pair(g, "minkowski", "conformal(0.5)")
}

/// `minkowski ⪯ squeezed(1.5) ⪰ warped(0.2)`: one forward and one
/// backward link, all metrics in splitting form.
pub fn zigzag(g: &SpacetimeGrid) -> ParacausalChain {
    ParacausalChain::new(
        vec![preset("minkowski", g), preset("squeezed(1.5)", g), preset("warped(0.2)", g)],
        vec![LinkDirection::Forward, LinkDirection::Backward],
    )
    .unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
