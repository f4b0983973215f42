use moellerlab_lattice::{Range, ScalarField};

use crate::metric::SplitForm;
use crate::tensor::{Covector, TangentVector};
use crate::{GeometryError, MetricField};

/// `−β² dt² + α(t) h dx²`; `alpha` must be positive and constant on each
/// time level.
pub fn alpha_rescale(split: &SplitForm, alpha: &ScalarField) -> Result<MetricField, GeometryError> {
    let grid = *split.lapse.grid();
    if !grid.same_lattice(alpha.grid()) {
        return Err(GeometryError::GridMismatch);
    }
    for n in 0..grid.nt {
        let row = alpha.level(n);
        if row.iter().any(|&a| a != row[0]) {
            return Err(GeometryError::NotTimeDependentOnly { n });
        }
    }
    let scaled = split.spatial.zip_with(alpha, Range::Positive, |h, a| a * h)?;
    MetricField::from_split(&split.lapse, &scaled)
}

/// Future unit normal of the `t`-slices of `g`, or the first point where
/// the slice fails to be spacelike.
fn slice_normal(g: &MetricField, p: usize) -> Result<TangentVector, GeometryError> {
    let nx = g.grid().nx;
    let inv = g.components()[p].inverse();
    if !(inv.tt < 0.0) {
        return Err(GeometryError::SlicesNotSpacelike { n: p / nx, j: p % nx });
    }
    let v = inv.raise(Covector::new(-1.0, 0.0));
    let m = g.components()[p];
    Ok(if m.eval(g.orientation()[p], v) < 0.0 { v } else { -v })
}

/// Time profile `α` making the future cones of `−β²dt² + αh` (from the
/// splitting of `g`) meet those of `g'`.
///
/// Per level, `1/α = M_n + 1` with `M_n` the largest `h W² / (β² Z²)` for
/// the slice normal `n' = Z ∂_t + W ∂_x` of `g'`; the levels are then
/// smoothed downward so no level exceeds its unsmoothed value.
pub fn tune_alpha(g: &MetricField, g2: &MetricField) -> Result<ScalarField, GeometryError> {
    let strip = alpha_strip_values(g, g2)?;
    let grid = g.grid().with_rank(1)?;
    let nx = grid.nx;
    let nt = grid.nt as isize;
    let window_min = |n: isize, r: isize| {
        (n - r..=n + r).map(|k| strip[k.clamp(0, nt - 1) as usize]).fold(f64::INFINITY, f64::min)
    };
    let mins: Vec<f64> = (0..nt).map(|n| window_min(n, 2)).collect();
    let smooth: Vec<f64> = (0..nt)
        .map(|n| (mins[(n - 1).max(0) as usize] + mins[n as usize] + mins[(n + 1).min(nt - 1) as usize]) / 3.0)
        .collect();
    let values = (0..grid.points()).map(|p| smooth[p / nx]).collect();
    Ok(ScalarField::new(&grid, values, Range::Positive)?)
}

/// Unsmoothed per-level values `1/(M_n + 1)`.
pub fn alpha_strip_values(g: &MetricField, g2: &MetricField) -> Result<Vec<f64>, GeometryError> {
    if !g.same_grid(g2) {
        return Err(GeometryError::GridMismatch);
    }
    let split = g.orthogonal_split()?;
    let grid = *split.lapse.grid();
    (0..grid.nt)
        .map(|n| {
            let mut worst: f64 = 0.0;
            for j in 0..grid.nx {
                let v = slice_normal(g2, grid.point(n, j))?;
                if !(v.t > 0.0) {
                    return Err(GeometryError::TimeOrientationMismatch { n, j });
                }
                let beta = split.lapse.get(n, j);
                let h = split.spatial.get(n, j);
                worst = worst.max(h * v.x * v.x / (beta * beta * v.t * v.t));
            }
            Ok(1.0 / (worst + 1.0))
        })
        .collect()
}
