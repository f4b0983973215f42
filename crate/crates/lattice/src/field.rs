use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{LatticeError, SpacetimeGrid};

/// Optional pointwise constraint on a scalar field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Range {
    Any,
    /// Closed unit interval, as for cutoff profiles.
    Unit,
    /// Strictly positive, as for volume weights and lapses.
    Positive,
}

impl Range {
    fn admits(self, v: f64) -> bool {
        match self {
            Range::Any => v.is_finite(),
            Range::Unit => (0.0..=1.0).contains(&v),
            Range::Positive => v > 0.0 && v.is_finite(),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Range::Any => "finite",
            Range::Unit => "[0,1]",
            Range::Positive => "(0,inf)",
        }
    }
}

/// Real function on lattice points, stored at `n·nx + j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    grid: SpacetimeGrid,
    values: Vec<f64>,
    range: Range,
}

impl ScalarField {
    pub fn new(grid: &SpacetimeGrid, values: Vec<f64>, range: Range) -> Result<Self, LatticeError> {
        if values.len() != grid.points() {
            return Err(LatticeError::ShapeMismatch { expected: grid.points(), found: values.len() });
        }
        for (p, &v) in values.iter().enumerate() {
            if !range.admits(v) {
                return Err(LatticeError::RangeViolation {
                    n: p / grid.nx,
                    j: p % grid.nx,
                    value: v,
                    range: range.label(),
                });
            }
        }
        Ok(Self { grid: *grid, values, range })
    }

    pub fn constant(grid: &SpacetimeGrid, v: f64, range: Range) -> Result<Self, LatticeError> {
        Self::new(grid, vec![v; grid.points()], range)
    }

    pub fn from_fn(
        grid: &SpacetimeGrid,
        range: Range,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self, LatticeError> {
        let mut values = Vec::with_capacity(grid.points());
        for n in 0..grid.nt {
            for j in 0..grid.nx {
                values.push(f(grid.t(n), grid.x(j)));
            }
        }
        Self::new(grid, values, range)
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn range(&self) -> Range {
        self.range
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, n: usize, j: usize) -> f64 {
        self.values[n * self.grid.nx + j]
    }

    pub fn level(&self, n: usize) -> &[f64] {
        &self.values[n * self.grid.nx..(n + 1) * self.grid.nx]
    }

    /// Pointwise map, re-validated against `range`.
    pub fn map(&self, range: Range, f: impl Fn(f64) -> f64) -> Result<Self, LatticeError> {
        Self::new(&self.grid, self.values.iter().map(|&v| f(v)).collect(), range)
    }

    pub fn zip_with(
        &self,
        other: &Self,
        range: Range,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self, LatticeError> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(LatticeError::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self::new(&self.grid, values, range)
    }
}

/// Per-point real `r×r` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    grid: SpacetimeGrid,
    blocks: Vec<DMatrix<f64>>,
}

impl MatrixField {
    pub fn new(grid: &SpacetimeGrid, blocks: Vec<DMatrix<f64>>) -> Result<Self, LatticeError> {
        if blocks.len() != grid.points() {
            return Err(LatticeError::ShapeMismatch { expected: grid.points(), found: blocks.len() });
        }
        let r = grid.rank;
        if let Some(b) = blocks.iter().find(|b| b.nrows() != r || b.ncols() != r) {
            return Err(LatticeError::ShapeMismatch { expected: r * r, found: b.len() });
        }
        Ok(Self { grid: *grid, blocks })
    }

    pub fn constant(grid: &SpacetimeGrid, m: DMatrix<f64>) -> Result<Self, LatticeError> {
        Self::new(grid, vec![m; grid.points()])
    }

    pub fn zeros(grid: &SpacetimeGrid) -> Self {
        let r = grid.rank;
        Self { grid: *grid, blocks: vec![DMatrix::zeros(r, r); grid.points()] }
    }

    pub fn from_fn(grid: &SpacetimeGrid, mut f: impl FnMut(f64, f64) -> DMatrix<f64>) -> Result<Self, LatticeError> {
        let mut blocks = Vec::with_capacity(grid.points());
        for n in 0..grid.nt {
            for j in 0..grid.nx {
                blocks.push(f(grid.t(n), grid.x(j)));
            }
        }
        Self::new(grid, blocks)
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn get(&self, n: usize, j: usize) -> &DMatrix<f64> {
        &self.blocks[n * self.grid.nx + j]
    }

    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&v| v == 0.0))
    }
}

/// Symmetric positive definite fiber inner product at every point.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberMetric(MatrixField);

impl FiberMetric {
    pub fn new(field: MatrixField) -> Result<Self, LatticeError> {
        let nx = field.grid.nx;
        for (p, b) in field.blocks.iter().enumerate() {
            let scale = b.amax().max(1.0);
            let symmetric = (b - b.transpose()).amax() <= 1e-12 * scale;
            if !symmetric || b.clone().cholesky().is_none() {
                return Err(LatticeError::NotPositiveDefinite { n: p / nx, j: p % nx });
            }
        }
        Ok(Self(field))
    }

    pub fn identity(grid: &SpacetimeGrid) -> Self {
        let r = grid.rank;
        Self(MatrixField { grid: *grid, blocks: vec![DMatrix::identity(r, r); grid.points()] })
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.0.grid
    }

    pub fn get(&self, n: usize, j: usize) -> &DMatrix<f64> {
        self.0.get(n, j)
    }

    pub fn field(&self) -> &MatrixField {
        &self.0
    }

    /// Whether every block is the identity.
    pub fn is_identity(&self) -> bool {
        let r = self.0.grid.rank;
        let id = DMatrix::<f64>::identity(r, r);
        self.0.blocks.iter().all(|b| *b == id)
    }

    /// `⟨u|v⟩` at point `(n, j)`.
    pub fn pair(&self, n: usize, j: usize, u: &[f64], v: &[f64]) -> f64 {
        let k = self.get(n, j);
        let r = u.len();
        let mut s = 0.0;
        for a in 0..r {
            for b in 0..r {
                s += u[a] * k[(a, b)] * v[b];
            }
        }
        s
    }
}
