use std::ops::RangeInclusive;

use moellerlab_lattice::SpacetimeGrid;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::kernel::VacuumKernel;
use crate::HadamardError;

/// Source points `q` at levels `(1..=7)/8` of the window and at spatial
/// offsets `L/8` apart.
pub fn default_columns(grid: &SpacetimeGrid) -> Vec<usize> {
    let xs = grid.nx.min(8);
    let mut out = Vec::with_capacity(7 * xs);
    for i in 1..=7 {
        let n = (i * (grid.nt - 1) + 4) / 8;
        for k in 0..xs {
            out.push(grid.point(n, k * grid.nx / xs));
        }
    }
    out.dedup();
    out
}

/// Kernel values `K(p, q)` for every `p` on a range of levels and a few
/// columns `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledKernel {
    grid: SpacetimeGrid,
    levels: RangeInclusive<usize>,
    columns: Vec<usize>,
    values: DMatrix<Complex64>,
}

impl SampledKernel {
    pub fn new(grid: &SpacetimeGrid, levels: RangeInclusive<usize>, columns: Vec<usize>, values: DMatrix<Complex64>) -> Result<Self, HadamardError> {
        if columns.is_empty() {
            return Err(HadamardError::EmptySample);
        }
        if levels.is_empty() || *levels.end() >= grid.nt || values.shape() != (levels.clone().count() * grid.nx, columns.len()) {
            return Err(HadamardError::GridMismatch);
        }
        if columns.iter().any(|&q| q >= grid.points()) {
            return Err(HadamardError::GridMismatch);
        }
        Ok(Self { grid: *grid, levels, columns, values })
    }

    /// Columns of `kernel` over the whole window.
    pub fn of(kernel: &VacuumKernel, columns: &[usize]) -> Result<Self, HadamardError> {
        let g = kernel.grid();
        let mut values = DMatrix::zeros(g.points(), columns.len());
        for (c, &q) in columns.iter().enumerate() {
            if q >= g.points() {
                return Err(HadamardError::GridMismatch);
            }
            values.set_column(c, &kernel.column(q));
        }
        Self::new(g, 0..=g.nt - 1, columns.to_vec(), values)
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn levels(&self) -> RangeInclusive<usize> {
        self.levels.clone()
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    /// Rows indexed by `(n − first)·nx + j`.
    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    pub fn level_count(&self) -> usize {
        self.levels.clone().count()
    }

    /// `K(n, ·; q)` for the `c`-th column.
    pub fn slice(&self, c: usize, n: usize) -> &[Complex64] {
        let nx = self.grid.nx;
        let r = (n - self.levels.start()) * nx;
        let rows = self.values.nrows();
        &self.values.as_slice()[c * rows + r..c * rows + r + nx]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    fn check(&self, other: &Self) -> Result<(), HadamardError> {
        if self.grid != other.grid || self.levels != other.levels || self.columns != other.columns {
            return Err(HadamardError::GridMismatch);
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HadamardError> {
        self.check(other)?;
        Ok(Self { values: &self.values - &other.values, ..self.clone() })
    }

    /// Same columns restricted to fewer levels.
    pub fn restrict(&self, levels: RangeInclusive<usize>) -> Result<Self, HadamardError> {
        if levels.start() < self.levels.start() || levels.end() > self.levels.end() || levels.is_empty() {
            return Err(HadamardError::GridMismatch);
        }
        let nx = self.grid.nx;
        let r = (levels.start() - self.levels.start()) * nx;
        let rows = levels.clone().count() * nx;
        let values = self.values.rows(r, rows).into_owned();
        Ok(Self { grid: self.grid, levels, columns: self.columns.clone(), values })
    }
}
