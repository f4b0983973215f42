use moellerlab_greenhyp::{GreenSystem, HyperbolicOperator};
use moellerlab_moller::MollerOperator;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::kernel::{apply_complex, VacuumKernel};
use crate::sample::{default_columns, SampledKernel};
use crate::smooth::{smoothness_proxy, SmoothnessReport, PROXY_FOR};
use crate::HadamardError;

/// `Δ = ν − νᵀ − iG` on the sampled columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub identity: String,
    pub sup_norm: f64,
    /// `sup|Δ| / sup|ν|`.
    pub relative: f64,
    pub smoothness: SmoothnessReport,
    /// Passes when `Δ` is smooth by the proxy.
    pub pass: bool,
}

/// `N` applied in one slot of a kernel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotReport {
    pub identity: String,
    pub sup_norm: f64,
    pub smoothness: SmoothnessReport,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BisolutionReport {
    pub left: SlotReport,
    pub right: SlotReport,
    pub sup_norm: f64,
    pub pass: bool,
}

/// Finite values, matching grid and `ν(p,q) = conj ν(q,p)` on the samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelReport {
    pub identity: String,
    pub finite: bool,
    pub hermiticity_defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HadamardVerdict {
    pub proxy_for: &'static str,
    pub kernel: KernelReport,
    pub ccr: HypothesisReport,
    pub bisolution: BisolutionReport,
    /// Smoothness of `ν' − reference`.
    pub proxy: SmoothnessReport,
    pub pass: bool,
}

/// Hermiticity tolerance relative to `sup|ν|`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

fn check_grid(kernel: &VacuumKernel, op: &HyperbolicOperator) -> Result<(), HadamardError> {
    if kernel.grid() != op.grid() {
        return Err(HadamardError::GridMismatch);
    }
    Ok(())
}

fn unit(len: usize, q: usize) -> Vec<f64> {
    let mut e = vec![0.0; len];
    e[q] = 1.0;
    e
}

/// `G(·, q)` in kernel values.
fn propagator_column(system: &GreenSystem, q: usize) -> Vec<f64> {
    let op = system.operator();
    let v = op.weight_at(q)[0];
    system.causal_raw(&unit(op.len(), q)).into_iter().map(|x| x / v).collect()
}

fn transpose_columns(kernel: &VacuumKernel, columns: &[usize]) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(kernel.grid().points(), columns.len());
    for (c, &q) in columns.iter().enumerate() {
        out.set_column(c, &kernel.row(q));
    }
    out
}

pub fn ccr_hypothesis_check(kernel: &VacuumKernel, op: &HyperbolicOperator) -> Result<HypothesisReport, HadamardError> {
    ccr_hypothesis_check_at(kernel, op, &default_columns(kernel.grid()))
}

pub fn ccr_hypothesis_check_at(kernel: &VacuumKernel, op: &HyperbolicOperator, columns: &[usize]) -> Result<HypothesisReport, HadamardError> {
    check_grid(kernel, op)?;
    let system = GreenSystem::new(op)?;
    let scale = SampledKernel::of(kernel, columns)?;
    let mut values = scale.values() - transpose_columns(kernel, columns);
    for (c, &q) in columns.iter().enumerate() {
        for (z, g) in values.column_mut(c).iter_mut().zip(propagator_column(&system, q)) {
            *z -= Complex64::new(0.0, g);
        }
    }
    let g = kernel.grid();
    let residual = SampledKernel::new(g, 0..=g.nt - 1, columns.to_vec(), values)?;
    let smoothness = smoothness_proxy(&residual, &scale)?;
    let sup_norm = residual.sup_norm();
    let size = scale.sup_norm();
    Ok(HypothesisReport {
        identity: "nu(x,y) - nu(y,x) = i G(x,y) mod smooth".into(),
        sup_norm,
        relative: if size > 0.0 { sup_norm / size } else { sup_norm },
        pass: smoothness.pass,
        smoothness,
    })
}

/// Second difference in time of the columns, on levels `1..nt−1`.
fn time_curvature(g: &moellerlab_lattice::SpacetimeGrid, col: &DVector<Complex64>) -> Vec<Complex64> {
    let nx = g.nx;
    (nx..(g.nt - 1) * nx).map(|p| (col[p + nx] - 2.0 * col[p] + col[p - nx]) / (g.dt * g.dt)).collect()
}

fn slot_report(identity: &str, residual: SampledKernel, scale: SampledKernel) -> Result<SlotReport, HadamardError> {
    let smoothness = smoothness_proxy(&residual, &scale)?;
    Ok(SlotReport { identity: identity.into(), sup_norm: residual.sup_norm(), pass: smoothness.pass, smoothness })
}

/// `N` in the left slot on interior levels, and in the right slot at the
/// sampled columns, which must lie on interior levels.
pub fn bisolution_check(kernel: &VacuumKernel, op: &HyperbolicOperator) -> Result<BisolutionReport, HadamardError> {
    bisolution_check_at(kernel, op, &default_columns(kernel.grid()))
}

pub fn bisolution_check_at(kernel: &VacuumKernel, op: &HyperbolicOperator, columns: &[usize]) -> Result<BisolutionReport, HadamardError> {
    check_grid(kernel, op)?;
    let g = *kernel.grid();
    if g.nt < 3 || columns.iter().any(|&q| q < g.nx || q >= (g.nt - 1) * g.nx) {
        return Err(HadamardError::GridMismatch);
    }
    let interior = (g.nt - 2) * g.nx;
    let apply = |u: &[f64]| op.apply_raw(u);
    let mut left = DMatrix::zeros(interior, columns.len());
    let mut left_scale = DMatrix::zeros(interior, columns.len());
    let mut right = DMatrix::zeros(g.points(), columns.len());
    let mut right_scale = DMatrix::zeros(g.points(), columns.len());
    for (c, &q) in columns.iter().enumerate() {
        let col = kernel.column(q);
        let applied = apply_complex(&apply, col.as_slice());
        left.column_mut(c).copy_from_slice(&applied[g.nx..(g.nt - 1) * g.nx]);
        left_scale.column_mut(c).copy_from_slice(&time_curvature(&g, &col));

        let stencil = op.apply_transpose_raw(&unit(g.points(), q));
        let mut acc = DVector::zeros(g.points());
        for (q2, &w) in stencil.iter().enumerate() {
            if w != 0.0 {
                acc += kernel.column(q2) * Complex64::new(w, 0.0);
            }
        }
        right.set_column(c, &acc);
        let curv = (kernel.column(q + g.nx) - kernel.column(q) * Complex64::new(2.0, 0.0) + kernel.column(q - g.nx)) / Complex64::new(g.dt * g.dt, 0.0);
        right_scale.set_column(c, &curv);
    }
    let inner = 1..=g.nt - 2;
    let left = slot_report(
        "N_x nu(x,y) = 0 mod smooth",
        SampledKernel::new(&g, inner.clone(), columns.to_vec(), left)?,
        SampledKernel::new(&g, inner, columns.to_vec(), left_scale)?,
    )?;
    let right = slot_report(
        "N_y nu(x,y) = 0 mod smooth",
        SampledKernel::new(&g, 0..=g.nt - 1, columns.to_vec(), right)?,
        SampledKernel::new(&g, 0..=g.nt - 1, columns.to_vec(), right_scale)?,
    )?;
    Ok(BisolutionReport { sup_norm: left.sup_norm.max(right.sup_norm), pass: left.pass && right.pass, left, right })
}

/// `ν' = ν ∘ (R† ⊗ R†)`, in kernel values `K' = R K Rᵀ`.
pub fn pullback_kernel(kernel: &VacuumKernel, r: &MollerOperator) -> Result<VacuumKernel, HadamardError> {
    if r.grid() != kernel.grid() {
        return Err(HadamardError::GridMismatch);
    }
    let map = |u: &[f64]| r.apply_raw(u);
    Ok(kernel.map_left(&map).map_right(&map))
}

pub fn kernel_check(kernel: &VacuumKernel, op: &HyperbolicOperator) -> Result<KernelReport, HadamardError> {
    check_grid(kernel, op)?;
    let columns = default_columns(kernel.grid());
    let values = SampledKernel::of(kernel, &columns)?;
    let transposed = transpose_columns(kernel, &columns);
    let finite = values.values().iter().all(|z| z.re.is_finite() && z.im.is_finite());
    let defect = values.values().iter().zip(transposed.iter()).fold(0.0, |m: f64, (a, b)| m.max((a - b.conj()).norm()));
    let tolerance = HERMITICITY_TOLERANCE * values.sup_norm().max(1.0);
    Ok(KernelReport {
        identity: "nu is a Hermitian kernel on the grid".into(),
        finite,
        hermiticity_defect: defect,
        tolerance,
        pass: finite && defect <= tolerance,
    })
}

/// Kernel, CCR and bisolution checks of `ν'` against `N'`, and the
/// smoothness proxy of `ν' − reference` relative to `ν'`.
pub fn hadamard_verdict(kernel: &VacuumKernel, reference: &VacuumKernel, op: &HyperbolicOperator) -> Result<HadamardVerdict, HadamardError> {
    if kernel.grid() != reference.grid() {
        return Err(HadamardError::GridMismatch);
    }
    let columns = default_columns(kernel.grid());
    let scale = SampledKernel::of(kernel, &columns)?;
    let difference = scale.sub(&SampledKernel::of(reference, &columns)?)?;
    let proxy = smoothness_proxy(&difference, &scale)?;
    let kernel_report = kernel_check(kernel, op)?;
    let ccr = ccr_hypothesis_check_at(kernel, op, &columns)?;
    let bisolution = bisolution_check_at(kernel, op, &columns)?;
    Ok(HadamardVerdict {
        proxy_for: PROXY_FOR,
        pass: kernel_report.pass && ccr.pass && bisolution.pass && proxy.pass,
        kernel: kernel_report,
        ccr,
        bisolution,
        proxy,
    })
}
