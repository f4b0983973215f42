use moellerlab_greenhyp::{CausalPropagator, HyperbolicOperator};
use moellerlab_lattice::{Section, SpacetimeGrid};
use moellerlab_moller::{LevelRange, MollerOperator};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::CcrError;

/// Two-point function on a grid as the bilinear form
/// `ω₂(f, h) = Σ f(p) B(p, q) h(q)`, where `B = V K V` for kernel values `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPointKernel {
    grid: SpacetimeGrid,
    form: DMatrix<Complex64>,
    levels: Option<LevelRange>,
}

fn complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

impl TwoPointKernel {
    /// `levels` restricts the sections the form may be paired with; `None`
    /// allows any.
    pub fn from_form(grid: &SpacetimeGrid, form: DMatrix<Complex64>, levels: Option<LevelRange>) -> Result<Self, CcrError> {
        if form.shape() != (grid.len(), grid.len()) {
            return Err(CcrError::Shape { rows: form.nrows(), cols: form.ncols(), expected: grid.len() });
        }
        Ok(Self { grid: *grid, form, levels })
    }

    /// Form of kernel values `K(p, q)` integrated with the volume weights
    /// of `op`.
    pub fn from_values(op: &HyperbolicOperator, values: &DMatrix<Complex64>, levels: Option<LevelRange>) -> Result<Self, CcrError> {
        let v = complex(&op.weight_dense());
        Self::from_form(op.grid(), &v * values * &v, levels)
    }

    /// Positive spectral part of the Hermitian form `i V G` restricted to
    /// sections on `levels`: `B = (|iVG| + iVG)/2`. It is positive
    /// semidefinite with `B − Bᵀ = iVG` there, so it defines a quasifree
    /// state of the lattice field.
    pub fn positive_part(propagator: &CausalPropagator, levels: LevelRange) -> Result<Self, CcrError> {
        let op = propagator.system().operator();
        let g = op.grid();
        let m = g.nx * g.rank;
        let idx: Vec<usize> = (levels.first * m..(levels.last + 1) * m).collect();
        let vg = propagator.weighted_kernel();
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |a, b| vg[(idx[a], idx[b])]);
        let defect = (&sub + sub.transpose()).amax() / sub.amax().max(1.0);
        if defect > crate::dictionary::ANTISYMMETRY_TOLERANCE {
            return Err(CcrError::NotAntisymmetric { defect });
        }
        let anti = (&sub - sub.transpose()) * 0.5;
        let h = anti.map(|v| Complex64::new(0.0, v));
        let eig = SymmetricEigen::new(h);
        let vecs = &eig.eigenvectors;
        let weights = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(l.max(0.0), 0.0)));
        let positive = vecs * weights * vecs.adjoint();
        let mut form = DMatrix::zeros(g.len(), g.len());
        for (a, &p) in idx.iter().enumerate() {
            for (b, &q) in idx.iter().enumerate() {
                form[(p, q)] = positive[(a, b)];
            }
        }
        Self::from_form(g, form, Some(levels))
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn form(&self) -> &DMatrix<Complex64> {
        &self.form
    }

    pub fn levels(&self) -> Option<LevelRange> {
        self.levels
    }

    /// Kernel values `K = V⁻¹ B V⁻¹` with the weights of `op`.
    pub fn values(&self, op: &HyperbolicOperator) -> Result<DMatrix<Complex64>, CcrError> {
        if op.grid() != &self.grid {
            return Err(CcrError::GridMismatch);
        }
        let vinv = op.weight_dense().try_inverse().ok_or(CcrError::GridMismatch)?;
        let vinv = complex(&vinv);
        Ok(&vinv * &self.form * &vinv)
    }

    /// Whether `f` vanishes outside the levels the kernel covers.
    pub fn covers(&self, f: &Section) -> bool {
        match (self.levels, f.support_levels()) {
            (None, _) | (_, None) => true,
            (Some(l), Some(w)) => l.first <= w.first && w.last <= l.last,
        }
    }

    /// `ω₂(f, h)`.
    pub fn pair(&self, f: &Section, h: &Section) -> Result<Complex64, CcrError> {
        if f.grid() != &self.grid || h.grid() != &self.grid {
            return Err(CcrError::GridMismatch);
        }
        Ok(self.pair_raw(f.values(), h.values()))
    }

    pub fn pair_raw(&self, f: &[f64], h: &[f64]) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (p, &fp) in f.iter().enumerate() {
            if fp == 0.0 {
                continue;
            }
            let row = self.form.row(p);
            sum += fp * row.iter().zip(h).map(|(b, &hq)| b * hq).sum::<Complex64>();
        }
        sum
    }

    /// `ω₂'(f, h) = ω₂(R† f, R† h)`, a two-point function over the target
    /// metric of `r`.
    pub fn pullback(&self, r: &MollerOperator) -> Result<Self, CcrError> {
        if r.grid() != &self.grid {
            return Err(CcrError::GridMismatch);
        }
        let dim = self.grid.len();
        let mut adj = DMatrix::zeros(dim, dim);
        let mut e = vec![0.0; dim];
        for c in 0..dim {
            e[c] = 1.0;
            adj.column_mut(c).copy_from_slice(&r.apply_adjoint_raw(&e));
            e[c] = 0.0;
        }
        let adj = complex(&adj);
        Self::from_form(&self.grid, adj.transpose() * &self.form * adj, None)
    }

    /// Largest entry of `B − B*`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.form - self.form.adjoint()).iter().fold(0.0, |m, v| m.max(v.norm()))
    }
}
