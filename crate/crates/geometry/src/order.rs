use serde::Serialize;

use crate::{GeometryError, MetricField};

/// Outcome of comparing cones everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Precedence {
    /// Some cone of `g` is not inside the cone of `g'`, or the time
    /// orientations agree at some points and disagree at others.
    Incomparable,
    /// Cones included and future halves included in future halves.
    Aligned,
    /// Cones included with the future of `g` inside the past of `g'`.
    Reversed,
}

impl Precedence {
    pub fn holds(self) -> bool {
        self != Precedence::Incomparable
    }
}

/// Whether the closed double cone of `g` at point `p` lies inside that of `g'`.
pub fn cone_inclusion_at(g: &MetricField, g2: &MetricField, p: usize) -> bool {
    let a = g.components()[p].timelike_arc();
    let b = g2.components()[p].timelike_arc();
    a.within(&b) || a.within(&b.opposite())
}

/// `V^g_p ⊂ V^{g'}_p` at lattice point `(n, j)`.
pub fn cone_inclusion(g: &MetricField, g2: &MetricField, n: usize, j: usize) -> Result<bool, GeometryError> {
    if !g.same_grid(g2) {
        return Err(GeometryError::GridMismatch);
    }
    Ok(cone_inclusion_at(g, g2, n * g.grid().nx + j))
}

/// Cone inclusion at every point, with the time-orientation verdict.
pub fn preceq(g: &MetricField, g2: &MetricField) -> Result<Precedence, GeometryError> {
    if !g.same_grid(g2) {
        return Err(GeometryError::GridMismatch);
    }
    let mut aligned = 0usize;
    let np = g.grid().points();
    for p in 0..np {
        if !cone_inclusion_at(g, g2, p) {
            return Ok(Precedence::Incomparable);
        }
        if g2.components()[p].eval(g2.orientation()[p], g.orientation()[p]) < 0.0 {
            aligned += 1;
        }
    }
    Ok(match aligned {
        a if a == np => Precedence::Aligned,
        0 => Precedence::Reversed,
        _ => Precedence::Incomparable,
    })
}
