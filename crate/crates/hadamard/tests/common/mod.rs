#![allow(dead_code)]

use std::f64::consts::PI;

use moellerlab_geometry::{metric_preset, MetricField};
use moellerlab_greenhyp::HyperbolicOperator;
use moellerlab_hadamard::{study_grid, KernelTerm, VacuumKernel};
use moellerlab_lattice::{make_grid, SpacetimeGrid};
use moellerlab_moller::canonical_operator;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `[0, 2] × S¹(2π)` with `nt` levels and `nx` sites.
pub fn grid(nt: usize, nx: usize) -> SpacetimeGrid {
    make_grid(nt, nx, 0.0, 2.0, 2.0 * PI, 1).unwrap()
}

pub fn flat(nt: usize) -> (MetricField, HyperbolicOperator) {
    let g = study_grid(nt).unwrap();
    let m = metric_preset("minkowski", &g).unwrap();
    let op = canonical_operator(&m).unwrap();
    (m, op)
}

fn column(values: Vec<f64>) -> DMatrix<Complex64> {
    DMatrix::from_iterator(values.len(), 1, values.into_iter().map(|v| Complex64::new(v, 0.0)))
}

/// `w a(p) b(q)` with real profiles.
pub fn product_kernel(g: &SpacetimeGrid, a: Vec<f64>, b: Vec<f64>, w: Complex64) -> VacuumKernel {
    VacuumKernel::new(g, vec![KernelTerm::Factored { left: column(a), weights: vec![w], right: column(b) }]).unwrap()
}

pub fn profile(g: &SpacetimeGrid, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    (0..g.points()).map(|p| f(g.t(p / g.nx), g.x(p % g.nx))).collect()
}

pub fn smooth_bump(g: &SpacetimeGrid, eps: f64) -> VacuumKernel {
    moellerlab_hadamard::smooth_perturbation(g, eps).unwrap()
}

pub fn white_noise(g: &SpacetimeGrid, amplitude: f64, seed: u64) -> VacuumKernel {
    moellerlab_hadamard::white_noise(g, amplitude, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}
