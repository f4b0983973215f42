use moellerlab_lattice::{Section, SpacetimeGrid};
use nalgebra::DMatrix;

use crate::block;
use crate::operator::{HyperbolicOperator, Neighbor};
use crate::GreenError;

/// Largest number of unknowns for which a dense kernel is assembled.
pub const DENSE_LIMIT: usize = 4096;

/// Retarded and advanced inverses of a hyperbolic operator, realised by
/// marching the stencil up or down in time.
///
/// `G⁺f` is the solution of `N u = f` on rows `0..nt−1` with `u = 0` on
/// level 0; `G⁻f` solves rows `1..nt` with `u = 0` on the last level.
#[derive(Debug, Clone)]
pub struct GreenSystem {
    op: HyperbolicOperator,
    upper_inv: Vec<f64>,
    lower_inv: Vec<f64>,
}

impl GreenSystem {
    pub fn new(op: &HyperbolicOperator) -> Result<Self, GreenError> {
        let g = *op.grid();
        let r = g.rank;
        let mut upper_inv = Vec::with_capacity(g.points() * r * r);
        let mut lower_inv = Vec::with_capacity(g.points() * r * r);
        for n in 0..g.nt {
            for j in 0..g.nx {
                let p = g.point(n, j);
                upper_inv.extend(block::inverse(op.block_at(p, Neighbor::Upper), r).ok_or(GreenError::SingularBlock { n, j })?);
                lower_inv.extend(block::inverse(op.block_at(p, Neighbor::Lower), r).ok_or(GreenError::SingularBlock { n, j })?);
            }
        }
        Ok(Self { op: op.clone(), upper_inv, lower_inv })
    }

    pub fn operator(&self) -> &HyperbolicOperator {
        &self.op
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        self.op.grid()
    }

    fn inv<'a>(&self, table: &'a [f64], p: usize) -> &'a [f64] {
        let rr = self.grid().rank * self.grid().rank;
        &table[p * rr..(p + 1) * rr]
    }

    /// `rhs −= (B u)` on level `n`, where `B` collects west, center, east.
    fn sub_level(&self, rhs: &mut [f64], u: &[f64], n: usize) {
        let g = self.grid();
        let r = g.rank;
        for j in 0..g.nx {
            let p = g.point(n, j);
            let out = &mut rhs[j * r..(j + 1) * r];
            for (k, jj) in [(Neighbor::West, g.west(j)), (Neighbor::Center, j), (Neighbor::East, g.east(j))] {
                block::mul_add(out, self.op.block_at(p, k), &u[jj * r..(jj + 1) * r], -1.0);
            }
        }
    }

    /// `rhs −= (Bᵀ y)` on level `n`.
    fn sub_level_t(&self, rhs: &mut [f64], y: &[f64], n: usize) {
        let g = self.grid();
        let r = g.rank;
        for j in 0..g.nx {
            let p = g.point(n, j);
            let yj = &y[j * r..(j + 1) * r];
            for (k, jj) in [(Neighbor::West, g.west(j)), (Neighbor::Center, j), (Neighbor::East, g.east(j))] {
                block::mul_t_add(&mut rhs[jj * r..(jj + 1) * r], self.op.block_at(p, k), yj, -1.0);
            }
        }
    }

    /// `rhs −= M_n u` for the pure-time block `k` on level `n`.
    fn sub_time(&self, rhs: &mut [f64], u: &[f64], n: usize, k: Neighbor, transpose: bool) {
        let g = self.grid();
        let r = g.rank;
        for j in 0..g.nx {
            let m = self.op.block_at(g.point(n, j), k);
            let (o, v) = (&mut rhs[j * r..(j + 1) * r], &u[j * r..(j + 1) * r]);
            if transpose {
                block::mul_t_add(o, m, v, -1.0);
            } else {
                block::mul_add(o, m, v, -1.0);
            }
        }
    }

    /// `out = M_n⁻¹ rhs` (or `M_n⁻ᵀ`) pointwise on level `n`.
    fn solve_level(&self, out: &mut [f64], rhs: &[f64], n: usize, table: &[f64], transpose: bool) {
        let g = self.grid();
        let r = g.rank;
        for j in 0..g.nx {
            let m = self.inv(table, g.point(n, j));
            let o = &mut out[j * r..(j + 1) * r];
            o.iter_mut().for_each(|v| *v = 0.0);
            if transpose {
                block::mul_t_add(o, m, &rhs[j * r..(j + 1) * r], 1.0);
            } else {
                block::mul_add(o, m, &rhs[j * r..(j + 1) * r], 1.0);
            }
        }
    }

    fn level_len(&self) -> usize {
        self.grid().nx * self.grid().rank
    }

    /// Marches up from levels `start−1, start` (already set in `u`),
    /// satisfying rows `start..=last_row`.
    pub(crate) fn march_up(&self, u: &mut [f64], f: &[f64], start: usize, last_row: usize) {
        let m = self.level_len();
        let mut rhs = vec![0.0; m];
        for n in start..=last_row {
            rhs.copy_from_slice(&f[n * m..(n + 1) * m]);
            if n > 0 {
                self.sub_time(&mut rhs, &u[(n - 1) * m..n * m], n, Neighbor::Lower, false);
            }
            self.sub_level(&mut rhs, &u[n * m..(n + 1) * m], n);
            self.solve_level(&mut u[(n + 1) * m..(n + 2) * m], &rhs, n, &self.upper_inv, false);
        }
    }

    /// Marches down, satisfying rows `start, start−1, …, first_row`.
    pub(crate) fn march_down(&self, u: &mut [f64], f: &[f64], start: usize, first_row: usize) {
        let m = self.level_len();
        let nt = self.grid().nt;
        let mut rhs = vec![0.0; m];
        for n in (first_row..=start).rev() {
            rhs.copy_from_slice(&f[n * m..(n + 1) * m]);
            if n + 1 < nt {
                self.sub_time(&mut rhs, &u[(n + 1) * m..(n + 2) * m], n, Neighbor::Upper, false);
            }
            self.sub_level(&mut rhs, &u[n * m..(n + 1) * m], n);
            self.solve_level(&mut u[(n - 1) * m..n * m], &rhs, n, &self.lower_inv, false);
        }
    }

    /// `G⁺f` on raw values.
    pub fn retarded_raw(&self, f: &[f64]) -> Vec<f64> {
        let mut u = vec![0.0; f.len()];
        self.march_up(&mut u, f, 0, self.grid().nt - 2);
        u
    }

    /// `G⁻f` on raw values.
    pub fn advanced_raw(&self, f: &[f64]) -> Vec<f64> {
        let mut u = vec![0.0; f.len()];
        let nt = self.grid().nt;
        self.march_down(&mut u, f, nt - 1, 1);
        u
    }

    /// `(G⁺)ᵀ v`.
    pub fn retarded_transpose_raw(&self, v: &[f64]) -> Vec<f64> {
        let m = self.level_len();
        let nt = self.grid().nt;
        let mut y = vec![0.0; v.len()];
        let mut rhs = vec![0.0; m];
        for k in (1..nt).rev() {
            rhs.copy_from_slice(&v[k * m..(k + 1) * m]);
            if k + 1 < nt {
                self.sub_level_t(&mut rhs, &y[k * m..(k + 1) * m], k);
                if k + 2 < nt {
                    self.sub_time(&mut rhs, &y[(k + 1) * m..(k + 2) * m], k + 1, Neighbor::Lower, true);
                }
            }
            self.solve_level(&mut y[(k - 1) * m..k * m], &rhs, k - 1, &self.upper_inv, true);
        }
        y
    }

    /// `(G⁻)ᵀ v`.
    pub fn advanced_transpose_raw(&self, v: &[f64]) -> Vec<f64> {
        let m = self.level_len();
        let nt = self.grid().nt;
        let mut y = vec![0.0; v.len()];
        let mut rhs = vec![0.0; m];
        for k in 0..nt - 1 {
            rhs.copy_from_slice(&v[k * m..(k + 1) * m]);
            if k > 0 {
                self.sub_level_t(&mut rhs, &y[k * m..(k + 1) * m], k);
                if k >= 2 {
                    self.sub_time(&mut rhs, &y[(k - 1) * m..k * m], k - 1, Neighbor::Upper, true);
                }
            }
            self.solve_level(&mut y[(k + 1) * m..(k + 2) * m], &rhs, k + 1, &self.lower_inv, true);
        }
        y
    }

    /// `G = G⁺ − G⁻` on raw values.
    pub fn causal_raw(&self, f: &[f64]) -> Vec<f64> {
        let a = self.retarded_raw(f);
        let b = self.advanced_raw(f);
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    }

    fn check_grid(&self, f: &Section) -> Result<(), GreenError> {
        if f.grid() != self.grid() {
            return Err(GreenError::GridMismatch);
        }
        Ok(())
    }

    /// Retarded solution for a source vanishing on the first two levels, so
    /// that the result vanishes on the first three.
    pub fn green_plus(&self, f: &Section) -> Result<Section, GreenError> {
        self.check_grid(f)?;
        if let Some(level) = (0..2).find(|&n| f.level(n).iter().any(|&v| v != 0.0)) {
            return Err(GreenError::SourceOutsideWindow { level });
        }
        Ok(Section::from_values(self.grid(), self.retarded_raw(f.values()))?)
    }

    /// Advanced solution for a source vanishing on the last two levels.
    pub fn green_minus(&self, f: &Section) -> Result<Section, GreenError> {
        self.check_grid(f)?;
        let nt = self.grid().nt;
        if let Some(level) = (nt - 2..nt).find(|&n| f.level(n).iter().any(|&v| v != 0.0)) {
            return Err(GreenError::SourceOutsideWindow { level });
        }
        Ok(Section::from_values(self.grid(), self.advanced_raw(f.values()))?)
    }

    /// `G f` for a source vanishing on the first two and last two levels.
    pub fn causal(&self, f: &Section) -> Result<Section, GreenError> {
        let a = self.green_plus(f)?;
        let b = self.green_minus(f)?;
        Ok(a.sub(&b)?)
    }
}

/// `G` of a fixed operator with its dense kernel, for grids small enough to
/// hold `(nt·nx·r)²` entries.
#[derive(Debug, Clone)]
pub struct CausalPropagator {
    system: GreenSystem,
    kernel: DMatrix<f64>,
}

impl CausalPropagator {
    pub fn new(op: &HyperbolicOperator) -> Result<Self, GreenError> {
        let dim = op.len();
        if dim > DENSE_LIMIT {
            return Err(GreenError::TooLarge { dim });
        }
        let system = GreenSystem::new(op)?;
        let mut kernel = DMatrix::zeros(dim, dim);
        let mut e = vec![0.0; dim];
        for c in 0..dim {
            e[c] = 1.0;
            let col = system.causal_raw(&e);
            kernel.column_mut(c).copy_from_slice(&col);
            e[c] = 0.0;
        }
        Ok(Self { system, kernel })
    }

    pub fn system(&self) -> &GreenSystem {
        &self.system
    }

    /// Matrix of `G` acting on raw values.
    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    /// `V G`, antisymmetric when the operator is self-adjoint.
    pub fn weighted_kernel(&self) -> DMatrix<f64> {
        self.system.operator().weight_dense() * &self.kernel
    }

    pub fn apply(&self, f: &Section) -> Result<Section, GreenError> {
        if f.grid() != self.system.grid() {
            return Err(GreenError::GridMismatch);
        }
        let v = &self.kernel * nalgebra::DVector::from_column_slice(f.values());
        Ok(Section::from_values(self.system.grid(), v.as_slice().to_vec())?)
    }
}

/// Green system of `ρN`; its solves equal `G±_N(ρ⁻¹f)`.
pub fn green_scaled(op: &HyperbolicOperator, rho: &moellerlab_lattice::ScalarField) -> Result<GreenSystem, GreenError> {
    GreenSystem::new(&op.scaled(rho)?)
}
