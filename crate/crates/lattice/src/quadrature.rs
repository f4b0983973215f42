use crate::{FiberMetric, LatticeError, ScalarField, Section};

/// Riemann sum `Σ ⟨f|h⟩_k · vol · dt · dx` over all lattice points.
pub fn weighted_inner_product(
    f: &Section,
    h: &Section,
    vol: &ScalarField,
    k: &FiberMetric,
) -> Result<f64, LatticeError> {
    let g = f.grid();
    if g != h.grid() || !g.same_lattice(vol.grid()) || !g.same_lattice(k.grid()) {
        return Err(LatticeError::GridMismatch);
    }
    if k.grid().rank != g.rank {
        return Err(LatticeError::ShapeMismatch { expected: g.rank, found: k.grid().rank });
    }
    for (p, &v) in vol.values().iter().enumerate() {
        if !(v > 0.0) {
            return Err(LatticeError::NonPositiveVolume { n: p / g.nx, j: p % g.nx, value: v });
        }
    }
    let mut total = 0.0;
    for n in 0..g.nt {
        for j in 0..g.nx {
            total += k.pair(n, j, f.at(n, j), h.at(n, j)) * vol.get(n, j);
        }
    }
    Ok(total * g.dt * g.dx)
}
