use std::f64::consts::PI;

use moellerlab_geometry::{metric_preset, LinkDirection, ParacausalChain};
use moellerlab_lattice::{make_grid, SpacetimeGrid};
use moellerlab_moller::{canonical_operator, compose_canonical, CANONICAL_MASS};
use serde::Serialize;

use crate::checks::{bisolution_check, ccr_hypothesis_check, kernel_check, pullback_kernel};
use crate::vacuum::{reference_vacuum, Dispersion};
use crate::HadamardError;

/// Time levels of the default refinement.
pub const STUDY_LEVELS: [usize; 3] = [64, 128, 256];
/// Spatial sites of the study grids.
pub const STUDY_SITES: usize = 16;
/// Duration of the study window.
pub const STUDY_DURATION: f64 = 2.0;

/// `[0, 2] × S¹(2π)` with `nt` levels and 16 sites.
pub fn study_grid(nt: usize) -> Result<SpacetimeGrid, HadamardError> {
    Ok(make_grid(nt, STUDY_SITES, 0.0, STUDY_DURATION, 2.0 * PI, 1)?)
}

/// `log(e_k / e_{k+1}) / log(h_k / h_{k+1})` for consecutive pairs.
pub fn observed_orders(steps: &[f64], errors: &[f64]) -> Vec<f64> {
    steps
        .windows(2)
        .zip(errors.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect()
}

/// Errors of one quantity over a sequence of time steps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementStudy {
    pub quantity: String,
    pub levels: Vec<usize>,
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
    pub min_order: f64,
}

impl RefinementStudy {
    pub fn new(quantity: impl Into<String>, levels: Vec<usize>, steps: Vec<f64>, errors: Vec<f64>) -> Self {
        let orders = observed_orders(&steps, &errors);
        let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
        Self { quantity: quantity.into(), levels, steps, errors, orders, min_order }
    }
}

/// Sup-norm of `ν − νᵀ − iG` for the flat ultrastatic vacuum against the
/// flat lattice operator.
pub fn hypothesis_study(levels: &[usize]) -> Result<RefinementStudy, HadamardError> {
    let mut steps = Vec::new();
    let mut errors = Vec::new();
    for &nt in levels {
        let g = study_grid(nt)?;
        let metric = metric_preset("minkowski", &g)?;
        let op = canonical_operator(&metric)?;
        let nu = reference_vacuum(&metric, CANONICAL_MASS, Dispersion::Continuum)?.kernel()?;
        steps.push(g.dt);
        errors.push(ccr_hypothesis_check(&nu, &op)?.sup_norm);
    }
    Ok(RefinementStudy::new("ccr hypothesis", levels.to_vec(), steps, errors))
}

/// `minkowski ⪯ squeezed(1.5) ⪰ ultrastatic(0.8)`.
pub fn study_chain(grid: &SpacetimeGrid) -> Result<ParacausalChain, HadamardError> {
    let metrics = ["minkowski", "squeezed(1.5)", "ultrastatic(0.8)"]
        .iter()
        .map(|name| metric_preset(name, grid))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ParacausalChain::new(metrics, vec![LinkDirection::Forward, LinkDirection::Backward])?)
}

/// Conclusions for the pulled-back vacuum along one chain per grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PullbackStudy {
    /// Well-defined Hermitian kernel on every grid.
    pub kernel_pass: bool,
    pub bisolution: RefinementStudy,
    pub ccr: RefinementStudy,
}

/// Pulls the flat vacuum back along `chain(grid)` on each grid and records
/// the conclusion residuals against the target operator.
pub fn pullback_study(
    levels: &[usize],
    chain: impl Fn(&SpacetimeGrid) -> Result<ParacausalChain, HadamardError>,
) -> Result<PullbackStudy, HadamardError> {
    let mut steps = Vec::new();
    let mut bisolution = Vec::new();
    let mut ccr = Vec::new();
    let mut kernel_pass = true;
    for &nt in levels {
        let g = study_grid(nt)?;
        let chain = chain(&g)?;
        let r = compose_canonical(&chain)?;
        let nu = reference_vacuum(chain.source(), CANONICAL_MASS, Dispersion::Continuum)?.kernel()?;
        let pulled = pullback_kernel(&nu, &r)?;
        let target = r.target();
        kernel_pass &= kernel_check(&pulled, target)?.pass;
        steps.push(g.dt);
        bisolution.push(bisolution_check(&pulled, target)?.sup_norm);
        ccr.push(ccr_hypothesis_check(&pulled, target)?.sup_norm);
    }
    Ok(PullbackStudy {
        kernel_pass,
        bisolution: RefinementStudy::new("pulled-back bisolution", levels.to_vec(), steps.clone(), bisolution),
        ccr: RefinementStudy::new("pulled-back ccr", levels.to_vec(), steps, ccr),
    })
}
