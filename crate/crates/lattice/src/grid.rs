use serde::{Deserialize, Serialize};

use crate::LatticeError;

/// A rectangular lattice on `[t_min, t_max] × S¹` carrying a rank-`r` fiber.
///
/// Time levels include both end points; spatial sites are periodic with
/// `x_j = j·dx`, `dx = length / nx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeGrid {
    pub nt: usize,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub length: f64,
    pub rank: usize,
    pub dt: f64,
    pub dx: f64,
}

pub fn make_grid(
    nt: usize,
    nx: usize,
    t_min: f64,
    t_max: f64,
    length: f64,
    rank: usize,
) -> Result<SpacetimeGrid, LatticeError> {
    SpacetimeGrid::new(nt, nx, t_min, t_max, length, rank)
}

impl SpacetimeGrid {
    pub fn new(
        nt: usize,
        nx: usize,
        t_min: f64,
        t_max: f64,
        length: f64,
        rank: usize,
    ) -> Result<Self, LatticeError> {
        if nt < 4 || nx < 4 {
            return Err(LatticeError::GridTooSmall { nt, nx });
        }
        if !(t_max > t_min) || !t_min.is_finite() || !t_max.is_finite() {
            return Err(LatticeError::NonPositiveExtent("time"));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(LatticeError::NonPositiveExtent("length"));
        }
        if rank == 0 {
            return Err(LatticeError::ZeroRank);
        }
        Ok(Self {
            nt,
            nx,
            t_min,
            t_max,
            length,
            rank,
            dt: (t_max - t_min) / (nt - 1) as f64,
            dx: length / nx as f64,
        })
    }

    /// Same lattice with a different fiber rank.
    pub fn with_rank(&self, rank: usize) -> Result<Self, LatticeError> {
        Self::new(self.nt, self.nx, self.t_min, self.t_max, self.length, rank)
    }

    pub fn t(&self, n: usize) -> f64 {
        self.t_min + self.dt * n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.dx * j as f64
    }

    /// Number of lattice points `nt·nx`.
    pub fn points(&self) -> usize {
        self.nt * self.nx
    }

    /// Number of real degrees of freedom `nt·nx·r`.
    pub fn len(&self) -> usize {
        self.points() * self.rank
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, n: usize, j: usize) -> usize {
        n * self.nx + j
    }

    pub fn index(&self, n: usize, j: usize, c: usize) -> usize {
        (n * self.nx + j) * self.rank + c
    }

    /// Periodic site index.
    pub fn wrap(&self, j: isize) -> usize {
        j.rem_euclid(self.nx as isize) as usize
    }

    pub fn east(&self, j: usize) -> usize {
        if j + 1 == self.nx {
            0
        } else {
            j + 1
        }
    }

    pub fn west(&self, j: usize) -> usize {
        if j == 0 {
            self.nx - 1
        } else {
            j - 1
        }
    }

    /// Index of the level closest to time `t`, clamped to the window.
    pub fn level_of(&self, t: f64) -> usize {
        let s = ((t - self.t_min) / self.dt).round();
        s.clamp(0.0, (self.nt - 1) as f64) as usize
    }

    /// Whether two grids describe the same lattice (rank ignored).
    pub fn same_lattice(&self, other: &Self) -> bool {
        self.nt == other.nt
            && self.nx == other.nx
            && self.t_min == other.t_min
            && self.t_max == other.t_max
            && self.length == other.length
    }
}
