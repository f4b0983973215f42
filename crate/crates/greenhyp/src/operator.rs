use moellerlab_geometry::{sharp_interpolation, MetricField};
use moellerlab_lattice::{FiberMetric, MatrixField, Range, ScalarField, Section, SpacetimeGrid};
use nalgebra::DMatrix;

use crate::block;
use crate::GreenError;

/// Position of a stencil block relative to its row point `(n, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    /// `(n−1, j)`
    Lower = 0,
    /// `(n, j−1)`
    West = 1,
    Center = 2,
    /// `(n, j+1)`
    East = 3,
    /// `(n+1, j)`
    Upper = 4,
}

pub const NEIGHBORS: [Neighbor; 5] = [Neighbor::Lower, Neighbor::West, Neighbor::Center, Neighbor::East, Neighbor::Upper];

const SYMBOL_TOL: f64 = 1e-12;

/// First- and zero-order coefficients `A₀ ∂_t + A₁ ∂_x + B`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerOrder {
    pub time: MatrixField,
    pub space: MatrixField,
    pub potential: MatrixField,
}

impl LowerOrder {
    pub fn zero(grid: &SpacetimeGrid) -> Self {
        Self { time: MatrixField::zeros(grid), space: MatrixField::zeros(grid), potential: MatrixField::zeros(grid) }
    }

    /// `B = m²·Id`.
    pub fn klein_gordon(grid: &SpacetimeGrid, mass: f64) -> Self {
        let r = grid.rank;
        let b = MatrixField::constant(grid, DMatrix::identity(r, r) * (mass * mass)).expect("shape matches");
        Self { potential: b, ..Self::zero(grid) }
    }
}

/// Lattice operator `β⁻²∂_t² − h⁻¹∂_x² + A₀∂_t + A₁∂_x + B` on sections of a
/// rank-`r` bundle, in three-level, five-point conservative form.
///
/// The scalar part is `(w dt dx)⁻¹ S` with `w = β√h` and `S` symmetric,
/// built from `p = √h/β` on half time levels and `q = β/√h` on half sites.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicOperator {
    grid: SpacetimeGrid,
    metric: MetricField,
    vol: ScalarField,
    fiber: FiberMetric,
    weight: Vec<f64>,
    weight_inv: Vec<f64>,
    blocks: Vec<f64>,
    principal: Vec<[f64; 2]>,
    self_adjoint: bool,
}

fn half_levels(values: &ScalarField, n: usize, j: usize) -> (f64, f64) {
    let nt = values.grid().nt;
    let here = values.get(n, j);
    let up = if n + 1 < nt { 0.5 * (here + values.get(n + 1, j)) } else { here };
    let down = if n > 0 { 0.5 * (here + values.get(n - 1, j)) } else { here };
    (down, up)
}

fn half_sites(values: &ScalarField, n: usize, j: usize) -> (f64, f64) {
    let g = values.grid();
    let here = values.get(n, j);
    (0.5 * (here + values.get(n, g.west(j))), 0.5 * (here + values.get(n, g.east(j))))
}

pub(crate) fn weight_blocks(grid: &SpacetimeGrid, vol: &ScalarField, fiber: &FiberMetric) -> Result<(Vec<f64>, Vec<f64>), GreenError> {
    let r = grid.rank;
    let mut w = Vec::with_capacity(grid.points() * r * r);
    let mut wi = Vec::with_capacity(grid.points() * r * r);
    for n in 0..grid.nt {
        for j in 0..grid.nx {
            let k = block::from_dmatrix(fiber.get(n, j));
            let s = vol.get(n, j) * grid.dt * grid.dx;
            let b: Vec<f64> = k.iter().map(|v| v * s).collect();
            wi.extend(block::inverse(&b, r).ok_or(GreenError::SingularBlock { n, j })?);
            w.extend(b);
        }
    }
    Ok((w, wi))
}

fn check_shapes(grid: &SpacetimeGrid, metric: &MetricField, lower: &LowerOrder, fiber: &FiberMetric) -> Result<(), GreenError> {
    let ok = grid.same_lattice(metric.grid())
        && lower.time.grid() == grid
        && lower.space.grid() == grid
        && lower.potential.grid() == grid;
    if !ok {
        return Err(GreenError::GridMismatch);
    }
    if fiber.grid() != grid {
        return Err(GreenError::GridMismatch);
    }
    Ok(())
}

/// Assembles `N` for a metric in orthogonal splitting form.
///
/// The fiber metric fixes the rank `r`; coefficient fields must be `r×r`.
pub fn build_operator(metric: &MetricField, lower: &LowerOrder, fiber: &FiberMetric) -> Result<HyperbolicOperator, GreenError> {
    let split = metric.orthogonal_split()?;
    let inv_h = split.spatial.map(Range::Positive, |h| 1.0 / h)?;
    build_operator_with_spatial(metric, lower, fiber, &inv_h)
}

/// As [`build_operator`], but with the spatial principal coefficient `h♯`
/// supplied separately. Fails with `SymbolMismatch` unless it equals the
/// metric's `g^{xx}`.
pub fn build_operator_with_spatial(
    metric: &MetricField,
    lower: &LowerOrder,
    fiber: &FiberMetric,
    inverse_spatial: &ScalarField,
) -> Result<HyperbolicOperator, GreenError> {
    let grid = *fiber.grid();
    check_shapes(&grid, metric, lower, fiber)?;
    let split = metric.orthogonal_split()?;
    let (beta, h) = (&split.lapse, &split.spatial);
    let vol = beta.zip_with(h, Range::Positive, |b, h| b * h.sqrt())?;
    let p = beta.zip_with(h, Range::Positive, |b, h| h.sqrt() / b)?;
    let q_metric = beta.zip_with(h, Range::Positive, |b, h| b / h.sqrt())?;
    let q = beta.zip_with(inverse_spatial, Range::Positive, |b, hs| b * hs.sqrt())?;
    let (weight, weight_inv) = weight_blocks(&grid, &vol, fiber)?;

    let r = grid.rank;
    let rr = r * r;
    let (dt, dx) = (grid.dt, grid.dx);
    let id = block::identity(r);
    let mut blocks = vec![0.0; grid.points() * 5 * rr];
    let mut principal = Vec::with_capacity(grid.points());
    for n in 0..grid.nt {
        for j in 0..grid.nx {
            let w = vol.get(n, j);
            let (p_dn, p_up) = half_levels(&p, n, j);
            let (q_w, q_e) = half_sites(&q, n, j);
            let (qm_w, qm_e) = half_sites(&q_metric, n, j);
            principal.push([0.5 * (p_dn + p_up) / w, 0.5 * (qm_w + qm_e) / w]);

            let scal = [
                p_dn / (w * dt * dt),
                -q_w / (w * dx * dx),
                -(p_dn + p_up) / (w * dt * dt) + (q_w + q_e) / (w * dx * dx),
                -q_e / (w * dx * dx),
                p_up / (w * dt * dt),
            ];
            let a0 = block::from_dmatrix(lower.time.get(n, j));
            let a1 = block::from_dmatrix(lower.space.get(n, j));
            let b = block::from_dmatrix(lower.potential.get(n, j));
            let base = (grid.point(n, j) * 5) * rr;
            for (k, s) in scal.iter().enumerate() {
                let out = &mut blocks[base + k * rr..base + (k + 1) * rr];
                for e in 0..rr {
                    out[e] = s * id[e];
                    out[e] += match k {
                        0 => -a0[e] / (2.0 * dt),
                        1 => -a1[e] / (2.0 * dx),
                        2 => b[e],
                        3 => a1[e] / (2.0 * dx),
                        _ => a0[e] / (2.0 * dt),
                    };
                }
            }
        }
    }
    let op = HyperbolicOperator {
        grid,
        metric: metric.clone(),
        vol,
        fiber: fiber.clone(),
        weight,
        weight_inv,
        blocks,
        principal,
        self_adjoint: lower.time.is_zero() && lower.space.is_zero() && potential_symmetric(lower, fiber),
    };
    if let Some((n, j)) = op.principal_mismatch(SYMBOL_TOL) {
        return Err(GreenError::SymbolMismatch { n, j });
    }
    Ok(op)
}

fn potential_symmetric(lower: &LowerOrder, fiber: &FiberMetric) -> bool {
    lower.potential.blocks().iter().zip(fiber.field().blocks()).all(|(b, k)| {
        let kb = k * b;
        kb == kb.transpose()
    })
}

impl HyperbolicOperator {
    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn rank(&self) -> usize {
        self.grid.rank
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    /// `√|det g|` per point.
    pub fn volume(&self) -> &ScalarField {
        &self.vol
    }

    pub fn fiber(&self) -> &FiberMetric {
        &self.fiber
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.self_adjoint
    }

    /// Stencil block of row point `(n, j)`, row-major `r×r`.
    pub fn block(&self, n: usize, j: usize, k: Neighbor) -> &[f64] {
        let rr = self.grid.rank * self.grid.rank;
        let base = (self.grid.point(n, j) * 5 + k as usize) * rr;
        &self.blocks[base..base + rr]
    }

    pub(crate) fn block_at(&self, p: usize, k: Neighbor) -> &[f64] {
        let rr = self.grid.rank * self.grid.rank;
        let base = (p * 5 + k as usize) * rr;
        &self.blocks[base..base + rr]
    }

    /// Quadrature weight block `vol·dt·dx·K` at point `p`.
    pub fn weight_at(&self, p: usize) -> &[f64] {
        let rr = self.grid.rank * self.grid.rank;
        &self.weight[p * rr..(p + 1) * rr]
    }

    pub fn weight_inv_at(&self, p: usize) -> &[f64] {
        let rr = self.grid.rank * self.grid.rank;
        &self.weight_inv[p * rr..(p + 1) * rr]
    }

    /// Point index of neighbor `k` of `(n, j)`, or `None` off the window.
    pub fn neighbor(&self, n: usize, j: usize, k: Neighbor) -> Option<usize> {
        let g = &self.grid;
        match k {
            Neighbor::Lower => (n > 0).then(|| g.point(n - 1, j)),
            Neighbor::Upper => (n + 1 < g.nt).then(|| g.point(n + 1, j)),
            Neighbor::West => Some(g.point(n, g.west(j))),
            Neighbor::East => Some(g.point(n, g.east(j))),
            Neighbor::Center => Some(g.point(n, j)),
        }
    }

    /// `N u` on raw values; levels outside the window count as zero.
    pub fn apply_raw(&self, u: &[f64]) -> Vec<f64> {
        let r = self.grid.rank;
        let mut out = vec![0.0; u.len()];
        for n in 0..self.grid.nt {
            for j in 0..self.grid.nx {
                let p = self.grid.point(n, j);
                let o = &mut out[p * r..(p + 1) * r];
                for k in NEIGHBORS {
                    if let Some(q) = self.neighbor(n, j, k) {
                        block::mul_add(o, self.block_at(p, k), &u[q * r..(q + 1) * r], 1.0);
                    }
                }
            }
        }
        out
    }

    /// `Nᵀ y` on raw values.
    pub fn apply_transpose_raw(&self, y: &[f64]) -> Vec<f64> {
        let r = self.grid.rank;
        let mut out = vec![0.0; y.len()];
        for n in 0..self.grid.nt {
            for j in 0..self.grid.nx {
                let p = self.grid.point(n, j);
                for k in NEIGHBORS {
                    if let Some(q) = self.neighbor(n, j, k) {
                        block::mul_t_add(&mut out[q * r..(q + 1) * r], self.block_at(p, k), &y[p * r..(p + 1) * r], 1.0);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, u: &Section) -> Result<Section, GreenError> {
        if u.grid() != &self.grid {
            return Err(GreenError::GridMismatch);
        }
        Ok(Section::from_values(&self.grid, self.apply_raw(u.values()))?)
    }

    /// Multiplies by the weight `V` pointwise.
    pub fn weigh_raw(&self, u: &[f64]) -> Vec<f64> {
        self.pointwise(u, &self.weight)
    }

    pub fn unweigh_raw(&self, u: &[f64]) -> Vec<f64> {
        self.pointwise(u, &self.weight_inv)
    }

    fn pointwise(&self, u: &[f64], blocks: &[f64]) -> Vec<f64> {
        let r = self.grid.rank;
        let mut out = vec![0.0; u.len()];
        for p in 0..self.grid.points() {
            block::mul_add(&mut out[p * r..(p + 1) * r], &blocks[p * r * r..(p + 1) * r * r], &u[p * r..(p + 1) * r], 1.0);
        }
        out
    }

    /// Dense matrix of `N` (small grids only).
    pub fn to_dense(&self) -> DMatrix<f64> {
        let r = self.grid.rank;
        let dim = self.grid.len();
        let mut m = DMatrix::zeros(dim, dim);
        for n in 0..self.grid.nt {
            for j in 0..self.grid.nx {
                let p = self.grid.point(n, j);
                for k in NEIGHBORS {
                    if let Some(q) = self.neighbor(n, j, k) {
                        let b = self.block_at(p, k);
                        for a in 0..r {
                            for c in 0..r {
                                m[(p * r + a, q * r + c)] += b[a * r + c];
                            }
                        }
                    }
                }
            }
        }
        m
    }

    /// Diagonal-block weight matrix `V` as a dense matrix.
    pub fn weight_dense(&self) -> DMatrix<f64> {
        let r = self.grid.rank;
        let dim = self.grid.len();
        let mut m = DMatrix::zeros(dim, dim);
        for p in 0..self.grid.points() {
            let b = self.weight_at(p);
            for a in 0..r {
                for c in 0..r {
                    m[(p * r + a, p * r + c)] = b[a * r + c];
                }
            }
        }
        m
    }

    /// Largest entry of `V N − (V N)ᵀ`, over blocks that couple two window
    /// points.
    pub fn self_adjointness_defect(&self) -> f64 {
        let r = self.grid.rank;
        let mut worst: f64 = 0.0;
        for n in 0..self.grid.nt {
            for j in 0..self.grid.nx {
                let p = self.grid.point(n, j);
                for (k, partner) in [(Neighbor::Upper, Neighbor::Lower), (Neighbor::East, Neighbor::West), (Neighbor::Center, Neighbor::Center)] {
                    let Some(q) = self.neighbor(n, j, k) else { continue };
                    let a = block::matmul(self.weight_at(p), self.block_at(p, k), r);
                    let b = block::matmul(self.weight_at(q), self.block_at(q, partner), r);
                    let bt = block::transpose(&b, r);
                    worst = a.iter().zip(&bt).fold(worst, |m, (x, y)| m.max((x - y).abs()));
                }
            }
        }
        worst
    }

    /// First point where the stencil's principal part departs from the
    /// metric-derived coefficients by more than `tol` (relative).
    pub fn principal_mismatch(&self, tol: f64) -> Option<(usize, usize)> {
        self.principal_defect_by_point(1).into_iter().find(|&(_, d)| d > tol).map(|(p, _)| (p / self.grid.nx, p % self.grid.nx))
    }

    /// Relative defect of the principal part on every interior level point.
    fn principal_defect_by_point(&self, margin: usize) -> Vec<(usize, f64)> {
        let r = self.grid.rank;
        let (dt, dx) = (self.grid.dt, self.grid.dx);
        let mut out = Vec::new();
        for n in margin..self.grid.nt - margin {
            for j in 0..self.grid.nx {
                let p = self.grid.point(n, j);
                let [rt, rx] = self.principal[p];
                let up = self.block_at(p, Neighbor::Upper);
                let dn = self.block_at(p, Neighbor::Lower);
                let ea = self.block_at(p, Neighbor::East);
                let we = self.block_at(p, Neighbor::West);
                let mut d: f64 = 0.0;
                for a in 0..r {
                    for c in 0..r {
                        let e = a * r + c;
                        let diag = if a == c { 1.0 } else { 0.0 };
                        d = d.max((0.5 * dt * dt * (up[e] + dn[e]) - rt * diag).abs() / rt);
                        d = d.max((-0.5 * dx * dx * (ea[e] + we[e]) - rx * diag).abs() / rx);
                    }
                }
                out.push((p, d));
            }
        }
        out
    }

    /// Largest relative principal-part defect over interior levels.
    pub fn principal_defect(&self) -> f64 {
        self.principal_defect_by_point(1).into_iter().fold(0.0, |m, (_, d)| m.max(d))
    }

    /// Principal coefficients `(−g^{tt}, g^{xx})` read off the stencil at
    /// an interior point, for the scalar part.
    pub fn stencil_symbol(&self, n: usize, j: usize) -> (f64, f64) {
        let (dt, dx) = (self.grid.dt, self.grid.dx);
        let up = self.block(n, j, Neighbor::Upper)[0];
        let dn = self.block(n, j, Neighbor::Lower)[0];
        let ea = self.block(n, j, Neighbor::East)[0];
        let we = self.block(n, j, Neighbor::West)[0];
        (0.5 * dt * dt * (up + dn), -0.5 * dx * dx * (ea + we))
    }

    /// Formal adjoint `V⁻¹ Nᵀ V`. Blocks that reach outside the window
    /// have no transposed partner and are kept as they are.
    pub fn adjoint(&self) -> HyperbolicOperator {
        let r = self.grid.rank;
        let rr = r * r;
        let mut blocks = self.blocks.clone();
        for n in 0..self.grid.nt {
            for j in 0..self.grid.nx {
                let p = self.grid.point(n, j);
                for (k, partner) in [
                    (Neighbor::Lower, Neighbor::Upper),
                    (Neighbor::West, Neighbor::East),
                    (Neighbor::Center, Neighbor::Center),
                    (Neighbor::East, Neighbor::West),
                    (Neighbor::Upper, Neighbor::Lower),
                ] {
                    let Some(q) = self.neighbor(n, j, k) else { continue };
                    let t = block::transpose(self.block_at(q, partner), r);
                    let b = block::matmul(&block::matmul(self.weight_inv_at(p), &t, r), self.weight_at(q), r);
                    let base = (p * 5 + k as usize) * rr;
                    blocks[base..base + rr].copy_from_slice(&b);
                }
            }
        }
        HyperbolicOperator { blocks, ..self.clone() }
    }

    /// `(N + N†)/2`, flagged self-adjoint.
    pub fn symmetrize(&self) -> HyperbolicOperator {
        let adj = self.adjoint();
        let blocks = self.blocks.iter().zip(&adj.blocks).map(|(a, b)| 0.5 * (a + b)).collect();
        HyperbolicOperator { blocks, self_adjoint: true, ..self.clone() }
    }

    /// `ρN` for a positive scalar `ρ`, keeping the geometric data of `N`.
    pub fn scaled(&self, rho: &ScalarField) -> Result<HyperbolicOperator, GreenError> {
        if !self.grid.same_lattice(rho.grid()) {
            return Err(GreenError::GridMismatch);
        }
        if let Some(p) = rho.values().iter().position(|&v| !(v > 0.0)) {
            return Err(GreenError::NonPositiveScale { n: p / self.grid.nx, j: p % self.grid.nx });
        }
        let per_point = 5 * self.grid.rank * self.grid.rank;
        let mut blocks = self.blocks.clone();
        for (p, chunk) in blocks.chunks_mut(per_point).enumerate() {
            let s = rho.values()[p];
            if s != 1.0 {
                chunk.iter_mut().for_each(|v| *v *= s);
            }
        }
        let unit = rho.values().iter().all(|&v| v == 1.0);
        Ok(HyperbolicOperator { blocks, self_adjoint: self.self_adjoint && unit, ..self.clone() })
    }

    /// Copies row `p` of `other` into `self`.
    pub(crate) fn copy_row_from(&mut self, other: &HyperbolicOperator, p: usize) {
        let per_point = 5 * self.grid.rank * self.grid.rank;
        self.blocks[p * per_point..(p + 1) * per_point].copy_from_slice(&other.blocks[p * per_point..(p + 1) * per_point]);
    }

    /// `dt` limit `0.8·dx / max(β/√h)` for the explicit march.
    pub fn cfl_limit(&self) -> f64 {
        let speed = self
            .principal
            .iter()
            .map(|[t, x]| (x / t).sqrt())
            .fold(0.0, f64::max);
        0.8 * self.grid.dx / speed
    }

    pub fn check_cfl(&self) -> Result<(), GreenError> {
        let limit = self.cfl_limit();
        if self.grid.dt > limit {
            return Err(GreenError::Cfl { dt: self.grid.dt, limit });
        }
        Ok(())
    }

    /// Largest `|N u − f|` over interior rows `1..nt−1`.
    pub fn interior_residual(&self, u: &[f64], f: &[f64]) -> f64 {
        let m = self.grid.nx * self.grid.rank;
        let nu = self.apply_raw(u);
        nu[m..nu.len() - m].iter().zip(&f[m..f.len() - m]).fold(0.0, |a, (x, y)| a.max((x - y).abs()))
    }

    /// Largest absolute stencil entry.
    pub fn max_coefficient(&self) -> f64 {
        block::max_abs(&self.blocks)
    }
}

/// `(1−χ)N₀ + χN₁` on the metric `g_χ` whose inverse blends the inverses.
///
/// Rows are blended pointwise; where `χ` is exactly 0 or 1 the row is the
/// corresponding operator's row.
pub fn convex_operator(n0: &HyperbolicOperator, n1: &HyperbolicOperator, chi: &ScalarField) -> Result<HyperbolicOperator, GreenError> {
    if n0.grid != n1.grid || !n0.grid.same_lattice(chi.grid()) {
        return Err(GreenError::GridMismatch);
    }
    if n0.fiber != n1.fiber {
        return Err(GreenError::FiberMismatch);
    }
    let metric = sharp_interpolation(&n0.metric, &n1.metric, chi)?;
    let split = metric.orthogonal_split()?;
    let vol = split.lapse.zip_with(&split.spatial, Range::Positive, |b, h| b * h.sqrt())?;
    let (weight, weight_inv) = weight_blocks(&n0.grid, &vol, &n0.fiber)?;
    let per_point = 5 * n0.grid.rank * n0.grid.rank;
    let mut blocks = Vec::with_capacity(n0.blocks.len());
    let mut principal = Vec::with_capacity(n0.principal.len());
    for p in 0..n0.grid.points() {
        let c = chi.values()[p];
        let (a, b) = (&n0.blocks[p * per_point..(p + 1) * per_point], &n1.blocks[p * per_point..(p + 1) * per_point]);
        if c == 0.0 {
            blocks.extend_from_slice(a);
            principal.push(n0.principal[p]);
        } else if c == 1.0 {
            blocks.extend_from_slice(b);
            principal.push(n1.principal[p]);
        } else {
            blocks.extend(a.iter().zip(b).map(|(x, y)| (1.0 - c) * x + c * y));
            let (u, v) = (n0.principal[p], n1.principal[p]);
            principal.push([(1.0 - c) * u[0] + c * v[0], (1.0 - c) * u[1] + c * v[1]]);
        }
    }
    Ok(HyperbolicOperator {
        grid: n0.grid,
        metric,
        vol,
        fiber: n0.fiber.clone(),
        weight,
        weight_inv,
        blocks,
        principal,
        self_adjoint: false,
    })
}

/// Symmetrized `N_χ`, with rows whose whole stencil sits where `χ = 0`
/// (resp. `χ = 1`) taken verbatim from a self-adjoint `N₀` (resp. `N₁`).
pub fn symmetrized_blend(n0: &HyperbolicOperator, n1: &HyperbolicOperator, chi: &ScalarField) -> Result<HyperbolicOperator, GreenError> {
    let mut op = convex_operator(n0, n1, chi)?.symmetrize();
    let grid = n0.grid;
    for n in 0..grid.nt {
        for j in 0..grid.nx {
            let p = grid.point(n, j);
            let stencil: Vec<f64> = NEIGHBORS.iter().filter_map(|&k| op.neighbor(n, j, k)).map(|q| chi.values()[q]).collect();
            if n0.self_adjoint && stencil.iter().all(|&c| c == 0.0) {
                op.copy_row_from(n0, p);
            } else if n1.self_adjoint && stencil.iter().all(|&c| c == 1.0) {
                op.copy_row_from(n1, p);
            }
        }
    }
    Ok(op)
}
