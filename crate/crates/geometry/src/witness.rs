use moellerlab_lattice::{Range, ScalarField};

use crate::blend::{squeeze_metric, squeeze_tensor};
use crate::metric::VectorField;
use crate::order::{preceq, Precedence};
use crate::tensor::TangentVector;
use crate::{GeometryError, MetricField};

/// First point where the open future cones are disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeGap {
    pub n: usize,
    pub j: usize,
}

/// A field in both open future cones, taken at the middle of the overlap
/// of the two future arcs.
pub fn cones_intersect_future(g: &MetricField, g2: &MetricField) -> Result<Result<VectorField, ConeGap>, GeometryError> {
    if !g.same_grid(g2) {
        return Err(GeometryError::GridMismatch);
    }
    let nx = g.grid().nx;
    let mut out = Vec::with_capacity(g.grid().points());
    for p in 0..g.grid().points() {
        match g.future_arc(p).overlap(&g2.future_arc(p)) {
            Some(o) => out.push(TangentVector::from_angle(o.center)),
            None => return Ok(Err(ConeGap { n: p / nx, j: p % nx })),
        }
    }
    Ok(Ok(VectorField::new(g.grid(), out)?))
}

const BISECTION_TOL: f64 = 1e-3;
const SAFETY: f64 = 0.95;

fn squeezed_fits(g: &MetricField, target: &MetricField, p: usize, x: TangentVector, a: f64) -> bool {
    let h = squeeze_tensor(&g.components()[p], x, a);
    h.future_arc(x).within(&target.future_arc(p))
}

fn tune_point(g: &MetricField, target: &MetricField, p: usize, x: TangentVector) -> f64 {
    if squeezed_fits(g, target, p, x, 1.0) {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if squeezed_fits(g, target, p, x, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo > 0.0 {
        return lo;
    }
    let mut a = hi;
    while !squeezed_fits(g, target, p, x, a) && a > f64::MIN_POSITIVE {
        a *= 0.5;
    }
    a
}

/// Squeezed `h = g^a` with `h ⪯ g` and `h ⪯ g'`, both future-aligned.
///
/// `a` is bisected per point, shrunk by a safety factor and replaced by
/// its minimum over the surrounding 3×3 block.
pub fn paracausal_witness(g: &MetricField, g2: &MetricField) -> Result<Option<MetricField>, GeometryError> {
    let x = match cones_intersect_future(g, g2)? {
        Ok(x) => x,
        Err(_) => return Ok(None),
    };
    let grid = *g.grid();
    let raw: Vec<f64> = (0..grid.points()).map(|p| SAFETY * tune_point(g, g2, p, x.values()[p])).collect();
    let mut a = vec![0.0; grid.points()];
    for n in 0..grid.nt {
        for j in 0..grid.nx {
            let mut m = f64::INFINITY;
            for dn in [-1isize, 0, 1] {
                let nn = (n as isize + dn).clamp(0, grid.nt as isize - 1) as usize;
                for dj in [-1isize, 0, 1] {
                    m = m.min(raw[grid.point(nn, grid.wrap(j as isize + dj))]);
                }
            }
            a[grid.point(n, j)] = m;
        }
    }
    let a = ScalarField::new(&grid.with_rank(1)?, a, Range::Positive)?;
    let h = squeeze_metric(g, &x, &a)?;
    let ok = preceq(&h, g)? == Precedence::Aligned && preceq(&h, g2)? == Precedence::Aligned;
    Ok(ok.then_some(h))
}
