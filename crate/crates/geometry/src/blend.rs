use moellerlab_lattice::ScalarField;

use crate::metric::VectorField;
use crate::order::{preceq, Precedence};
use crate::tensor::SymTensor2;
use crate::{GeometryError, MetricField};

fn check_blend_inputs(g: &MetricField, g2: &MetricField, chi: &ScalarField) -> Result<(), GeometryError> {
    if !g.same_grid(g2) || !g.grid().same_lattice(chi.grid()) {
        return Err(GeometryError::GridMismatch);
    }
    if let Some(p) = chi.values().iter().position(|c| !(0.0..=1.0).contains(c)) {
        let nx = g.grid().nx;
        return Err(GeometryError::CutoffOutOfRange { n: p / nx, j: p % nx });
    }
    if preceq(g, g2)? != Precedence::Aligned {
        return Err(GeometryError::NotComparable);
    }
    Ok(())
}

/// `(1−χ)g + χg'`, oriented like `g`. Requires `g ⪯ g'` with aligned futures.
pub fn convex_combination(g: &MetricField, g2: &MetricField, chi: &ScalarField) -> Result<MetricField, GeometryError> {
    check_blend_inputs(g, g2, chi)?;
    let comps = g
        .components()
        .iter()
        .zip(g2.components())
        .zip(chi.values())
        .map(|((a, b), &c)| match c {
            0.0 => *a,
            1.0 => *b,
            _ => a.lerp(b, c),
        })
        .collect();
    MetricField::new(g.grid(), comps, g.orientation().to_vec())
}

/// Metric whose inverse is `(1−χ)g♯ + χg'♯`, oriented like `g`.
///
/// Returns the input components unchanged where `χ` is exactly 0 or 1.
pub fn sharp_interpolation(g: &MetricField, g2: &MetricField, chi: &ScalarField) -> Result<MetricField, GeometryError> {
    check_blend_inputs(g, g2, chi)?;
    let comps = g
        .components()
        .iter()
        .zip(g2.components())
        .zip(chi.values())
        .map(|((a, b), &c)| match c {
            0.0 => *a,
            1.0 => *b,
            _ => a.inverse().lerp(&b.inverse(), c).inverse(),
        })
        .collect();
    MetricField::new(g.grid(), comps, g.orientation().to_vec())
}

/// `g^a = g + (a−1) X♭⊗X♭ / g(X,X)` at one point.
pub fn squeeze_tensor(g: &SymTensor2, x: crate::TangentVector, a: f64) -> SymTensor2 {
    let w = g.flat(x);
    let s = (a - 1.0) / g.norm2(x);
    SymTensor2::new(g.tt + s * w.t * w.t, g.tx + s * w.t * w.x, g.xx + s * w.x * w.x)
}

/// Narrows the cones of `g` around the timelike field `X` by the factor
/// field `a ∈ (0, 1]`; the result is oriented by `X`.
pub fn squeeze_metric(g: &MetricField, x: &VectorField, a: &ScalarField) -> Result<MetricField, GeometryError> {
    if !g.grid().same_lattice(x.grid()) || !g.grid().same_lattice(a.grid()) {
        return Err(GeometryError::GridMismatch);
    }
    let nx = g.grid().nx;
    let mut comps = Vec::with_capacity(g.grid().points());
    for (p, ((m, &v), &ap)) in g.components().iter().zip(x.values()).zip(a.values()).enumerate() {
        if !(ap > 0.0 && ap <= 1.0) {
            return Err(GeometryError::SqueezeOutOfRange { n: p / nx, j: p % nx, a: ap });
        }
        if !(m.norm2(v) < 0.0) {
            return Err(GeometryError::OrientationNotTimelike { n: p / nx, j: p % nx });
        }
        comps.push(if ap == 1.0 { *m } else { squeeze_tensor(m, v, ap) });
    }
    MetricField::new(g.grid(), comps, x.values().to_vec())
}
