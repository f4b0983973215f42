use std::f64::consts::{FRAC_PI_2, PI};

use moellerlab_ccr::PairingTable;
use moellerlab_geometry::{Arc, GeometryError, MetricField, SymTensor2, TangentVector};
use moellerlab_lattice::{Section, SpacetimeGrid};
use nalgebra::DMatrix;
use rand::Rng;

/// Uniform values in `[-1, 1]` on levels `first..=last`, zero elsewhere.
pub fn random_section(grid: &SpacetimeGrid, rng: &mut impl Rng, first: usize, last: usize) -> Section {
    let mut s = Section::zeros(grid);
    for n in first..=last {
        for v in s.level_mut(n) {
            *v = rng.random_range(-1.0..1.0);
        }
    }
    s
}

/// Antisymmetric table with entries in `[-scale, scale]`.
pub fn random_table(d: usize, scale: f64, rng: &mut impl Rng) -> PairingTable {
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i + 1..d {
            let v = rng.random_range(-scale..scale);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    PairingTable::new(m, 0.0).expect("antisymmetric by construction")
}

/// Future arcs with the first strictly inside the second.
fn nested_arcs(rng: &mut impl Rng) -> (Arc, Arc) {
    let outer = Arc { center: rng.random_range(-PI..PI), half_width: rng.random_range(0.3..FRAC_PI_2 - 0.05) };
    let hw = rng.random_range(0.05..outer.half_width - 0.02);
    let slack = outer.half_width - hw - 0.01;
    let inner = Arc { center: outer.center + rng.random_range(-slack..slack), half_width: hw };
    (inner, outer)
}

fn field_from_arcs(grid: &SpacetimeGrid, arcs: &[Arc], rng: &mut impl Rng) -> Result<MetricField, GeometryError> {
    let comps = arcs.iter().map(|a| SymTensor2::from_arc(*a).scale(rng.random_range(0.5..2.0))).collect();
    let orient = arcs.iter().map(|a| TangentVector::from_angle(a.center)).collect();
    MetricField::new(grid, comps, orient)
}

/// `(g, g')` with `g ⪯ g'`, futures aligned, cones and scales independent
/// at every point.
pub fn comparable_pair(grid: &SpacetimeGrid, rng: &mut impl Rng) -> Result<(MetricField, MetricField), GeometryError> {
    let (inner, outer): (Vec<Arc>, Vec<Arc>) = (0..grid.points()).map(|_| nested_arcs(rng)).unzip();
    Ok((field_from_arcs(grid, &inner, rng)?, field_from_arcs(grid, &outer, rng)?))
}
