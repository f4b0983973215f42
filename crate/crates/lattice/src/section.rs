use serde::{Deserialize, Serialize};

use crate::{LatticeError, SpacetimeGrid};

/// Inclusive range of time levels outside which a section vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub first: usize,
    pub last: usize,
}

impl TimeWindow {
    pub fn contains(&self, n: usize) -> bool {
        n >= self.first && n <= self.last
    }
}

/// Section of the rank-`r` bundle: one real vector per lattice point,
/// stored flat at `((n·nx)+j)·r + c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    grid: SpacetimeGrid,
    values: Vec<f64>,
    window: Option<TimeWindow>,
}

impl Section {
    pub fn zeros(grid: &SpacetimeGrid) -> Self {
        Self { grid: *grid, values: vec![0.0; grid.len()], window: None }
    }

    pub fn from_values(grid: &SpacetimeGrid, values: Vec<f64>) -> Result<Self, LatticeError> {
        if values.len() != grid.len() {
            return Err(LatticeError::ShapeMismatch { expected: grid.len(), found: values.len() });
        }
        Ok(Self { grid: *grid, values, window: None })
    }

    /// Samples `f(t, x, c)` at every lattice point.
    pub fn from_fn(grid: &SpacetimeGrid, mut f: impl FnMut(f64, f64, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for n in 0..grid.nt {
            for j in 0..grid.nx {
                for c in 0..grid.rank {
                    values.push(f(grid.t(n), grid.x(j), c));
                }
            }
        }
        Self { grid: *grid, values, window: None }
    }

    /// Marks the section as compactly supported in `first..=last`.
    ///
    /// The window must sit strictly inside the time extent and every value
    /// outside it must be zero.
    pub fn with_window(mut self, first: usize, last: usize) -> Result<Self, LatticeError> {
        if first == 0 || last + 1 >= self.grid.nt || first > last {
            return Err(LatticeError::WindowNotInterior { first, last });
        }
        let w = TimeWindow { first, last };
        for n in (0..self.grid.nt).filter(|&n| !w.contains(n)) {
            if self.level(n).iter().any(|&v| v != 0.0) {
                return Err(LatticeError::SupportOutsideWindow { level: n });
            }
        }
        self.window = Some(w);
        Ok(self)
    }

    /// Smallest window containing the nonzero levels, if any.
    pub fn support_levels(&self) -> Option<TimeWindow> {
        let nonzero = |n: &usize| self.level(*n).iter().any(|&v| v != 0.0);
        let first = (0..self.grid.nt).find(nonzero)?;
        let last = (0..self.grid.nt).rev().find(nonzero)?;
        Some(TimeWindow { first, last })
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn window(&self) -> Option<TimeWindow> {
        self.window
    }

    pub fn is_compact(&self) -> bool {
        self.window.is_some()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        self.window = None;
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, n: usize, j: usize, c: usize) -> f64 {
        self.values[self.grid.index(n, j, c)]
    }

    pub fn set(&mut self, n: usize, j: usize, c: usize, v: f64) {
        let i = self.grid.index(n, j, c);
        self.values[i] = v;
        if let Some(w) = self.window {
            if !w.contains(n) && v != 0.0 {
                self.window = None;
            }
        }
    }

    /// All values on time level `n`, length `nx·r`.
    pub fn level(&self, n: usize) -> &[f64] {
        let m = self.grid.nx * self.grid.rank;
        &self.values[n * m..(n + 1) * m]
    }

    pub fn level_mut(&mut self, n: usize) -> &mut [f64] {
        self.window = None;
        let m = self.grid.nx * self.grid.rank;
        &mut self.values[n * m..(n + 1) * m]
    }

    /// Fiber vector at one point.
    pub fn at(&self, n: usize, j: usize) -> &[f64] {
        let r = self.grid.rank;
        let p = self.grid.point(n, j) * r;
        &self.values[p..p + r]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    fn check_same(&self, other: &Self) -> Result<(), LatticeError> {
        if self.grid != other.grid {
            return Err(LatticeError::GridMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid, values, window: None })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { grid: self.grid, values, window: None })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * s).collect(),
            window: self.window,
        }
    }

    /// Pointwise product with a scalar field.
    pub fn mul_scalar(&self, f: &crate::ScalarField) -> Result<Self, LatticeError> {
        if !self.grid.same_lattice(f.grid()) {
            return Err(LatticeError::GridMismatch);
        }
        let r = self.grid.rank;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * f.values()[i / r])
            .collect();
        Ok(Self { grid: self.grid, values, window: None })
    }

    /// Largest absolute difference, or an error on mismatched grids.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, LatticeError> {
        self.check_same(other)?;
        Ok(self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}
