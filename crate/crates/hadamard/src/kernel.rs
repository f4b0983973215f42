use moellerlab_ccr::TwoPointKernel;
use moellerlab_greenhyp::HyperbolicOperator;
use moellerlab_lattice::SpacetimeGrid;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::HadamardError;

/// Largest grid for which a kernel may be materialized densely.
pub const DENSE_KERNEL_LIMIT: usize = 4096;

/// One summand of a kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelTerm {
    /// `L diag(w) R*`, columns of `L` and `R` indexed by grid points.
    Factored { left: DMatrix<Complex64>, weights: Vec<Complex64>, right: DMatrix<Complex64> },
    Dense(DMatrix<Complex64>),
}

/// Complex two-point kernel `ν(p, q)` on the points of a scalar grid, as a
/// sum of low-rank and dense terms.
#[derive(Debug, Clone, PartialEq)]
pub struct VacuumKernel {
    grid: SpacetimeGrid,
    terms: Vec<KernelTerm>,
}

/// Applies a real linear map to the real and imaginary parts of a complex
/// vector.
pub(crate) fn apply_complex(map: &(dyn Fn(&[f64]) -> Vec<f64> + Sync), v: &[Complex64]) -> Vec<Complex64> {
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.iter().map(|z| z.im).collect();
    map(&re).into_iter().zip(map(&im)).map(|(a, b)| Complex64::new(a, b)).collect()
}

fn map_columns(m: &DMatrix<Complex64>, map: &(dyn Fn(&[f64]) -> Vec<f64> + Sync)) -> DMatrix<Complex64> {
    let cols: Vec<Vec<Complex64>> = (0..m.ncols()).into_par_iter().map(|c| apply_complex(map, m.column(c).as_slice())).collect();
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for (c, col) in cols.iter().enumerate() {
        out.column_mut(c).copy_from_slice(col);
    }
    out
}

impl VacuumKernel {
    pub fn new(grid: &SpacetimeGrid, terms: Vec<KernelTerm>) -> Result<Self, HadamardError> {
        if grid.rank != 1 {
            return Err(HadamardError::Rank);
        }
        let n = grid.points();
        for t in &terms {
            let ok = match t {
                KernelTerm::Factored { left, weights, right } => {
                    left.nrows() == n && right.nrows() == n && left.ncols() == weights.len() && right.ncols() == weights.len()
                }
                KernelTerm::Dense(d) => d.shape() == (n, n),
            };
            if !ok {
                return Err(HadamardError::GridMismatch);
            }
        }
        Ok(Self { grid: *grid, terms })
    }

    /// The zero kernel.
    pub fn zero(grid: &SpacetimeGrid) -> Result<Self, HadamardError> {
        Self::new(grid, Vec::new())
    }

    /// `ε a(p) a(q)` for a real profile `a`.
    pub fn rank_one(grid: &SpacetimeGrid, profile: &[f64], amplitude: f64) -> Result<Self, HadamardError> {
        let a = DMatrix::from_iterator(profile.len(), 1, profile.iter().map(|&v| Complex64::new(v, 0.0)));
        Self::new(grid, vec![KernelTerm::Factored { left: a.clone(), weights: vec![Complex64::new(amplitude, 0.0)], right: a }])
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    pub fn value(&self, p: usize, q: usize) -> Complex64 {
        self.terms
            .iter()
            .map(|t| match t {
                KernelTerm::Factored { left, weights, right } => {
                    (0..weights.len()).map(|k| left[(p, k)] * weights[k] * right[(q, k)].conj()).sum()
                }
                KernelTerm::Dense(d) => d[(p, q)],
            })
            .sum()
    }

    /// `ν(·, q)`.
    pub fn column(&self, q: usize) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.grid.points());
        for t in &self.terms {
            match t {
                KernelTerm::Factored { left, weights, right } => {
                    let c = DVector::from_iterator(weights.len(), (0..weights.len()).map(|k| weights[k] * right[(q, k)].conj()));
                    out += left * c;
                }
                KernelTerm::Dense(d) => out += d.column(q),
            }
        }
        out
    }

    /// `ν(q, ·)`.
    pub fn row(&self, q: usize) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.grid.points());
        for t in &self.terms {
            match t {
                KernelTerm::Factored { left, weights, right } => {
                    let c = DVector::from_iterator(weights.len(), (0..weights.len()).map(|k| (left[(q, k)] * weights[k]).conj()));
                    out += (right * c).map(|z| z.conj());
                }
                KernelTerm::Dense(d) => out += d.row(q).transpose(),
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, HadamardError> {
        if other.grid != self.grid {
            return Err(HadamardError::GridMismatch);
        }
        Ok(Self { grid: self.grid, terms: self.terms.iter().chain(&other.terms).cloned().collect() })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                KernelTerm::Factored { left, weights, right } => {
                    KernelTerm::Factored { left: left.clone(), weights: weights.iter().map(|w| w * c).collect(), right: right.clone() }
                }
                KernelTerm::Dense(d) => KernelTerm::Dense(d * c),
            })
            .collect();
        Self { grid: self.grid, terms }
    }

    /// `ν(q, p)` as a kernel in `(p, q)`.
    pub fn transpose(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                KernelTerm::Factored { left, weights, right } => KernelTerm::Factored {
                    left: right.map(|z| z.conj()),
                    weights: weights.clone(),
                    right: left.map(|z| z.conj()),
                },
                KernelTerm::Dense(d) => KernelTerm::Dense(d.transpose()),
            })
            .collect();
        Self { grid: self.grid, terms }
    }

    /// `M ν` for a real map `M` acting on the first slot.
    pub fn map_left(&self, map: &(dyn Fn(&[f64]) -> Vec<f64> + Sync)) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                KernelTerm::Factored { left, weights, right } => {
                    KernelTerm::Factored { left: map_columns(left, map), weights: weights.clone(), right: right.clone() }
                }
                KernelTerm::Dense(d) => KernelTerm::Dense(map_columns(d, map)),
            })
            .collect();
        Self { grid: self.grid, terms }
    }

    /// `ν Mᵀ` for a real map `M` acting on the second slot.
    pub fn map_right(&self, map: &(dyn Fn(&[f64]) -> Vec<f64> + Sync)) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                KernelTerm::Factored { left, weights, right } => {
                    KernelTerm::Factored { left: left.clone(), weights: weights.clone(), right: map_columns(right, map) }
                }
                KernelTerm::Dense(d) => KernelTerm::Dense(map_columns(&d.transpose(), map).transpose()),
            })
            .collect();
        Self { grid: self.grid, terms }
    }

    /// Full `(nt·nx)²` table.
    pub fn dense(&self) -> Result<DMatrix<Complex64>, HadamardError> {
        let n = self.grid.points();
        if n > DENSE_KERNEL_LIMIT {
            return Err(HadamardError::TooLarge { dim: n });
        }
        let mut out = DMatrix::zeros(n, n);
        for t in &self.terms {
            match t {
                KernelTerm::Factored { left, weights, right } => {
                    out += left * DMatrix::from_diagonal(&DVector::from_column_slice(weights)) * right.adjoint();
                }
                KernelTerm::Dense(d) => out += d,
            }
        }
        Ok(out)
    }

    /// Bilinear form `V K V` over the weights of `op`, for the CCR layer.
    pub fn to_two_point(&self, op: &HyperbolicOperator) -> Result<TwoPointKernel, HadamardError> {
        if op.grid() != &self.grid {
            return Err(HadamardError::GridMismatch);
        }
        Ok(TwoPointKernel::from_values(op, &self.dense()?, None)?)
    }
}
