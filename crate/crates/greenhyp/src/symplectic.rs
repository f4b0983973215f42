use moellerlab_lattice::Section;

use crate::block;
use crate::operator::{HyperbolicOperator, Neighbor};
use crate::GreenError;

/// Flux of the pair `(Ψ, Φ)` between levels `n` and `n+1`.
fn half_level_flux(op: &HyperbolicOperator, psi: &[f64], phi: &[f64], n: usize) -> f64 {
    let g = op.grid();
    let r = g.rank;
    let m = g.nx * r;
    let mut sum = 0.0;
    for j in 0..g.nx {
        let p = g.point(n, j);
        let e = block::matmul(op.weight_at(p), op.block_at(p, Neighbor::Upper), r);
        let (a0, a1) = (&psi[n * m + j * r..n * m + (j + 1) * r], &psi[(n + 1) * m + j * r..(n + 1) * m + (j + 1) * r]);
        let (b0, b1) = (&phi[n * m + j * r..n * m + (j + 1) * r], &phi[(n + 1) * m + j * r..(n + 1) * m + (j + 1) * r]);
        let mut eb1 = vec![0.0; r];
        block::mul_add(&mut eb1, &e, b1, 1.0);
        let mut etb0 = vec![0.0; r];
        block::mul_t_add(&mut etb0, &e, b0, 1.0);
        sum += a0.iter().zip(&eb1).map(|(x, y)| x * y).sum::<f64>();
        sum -= a1.iter().zip(&etb0).map(|(x, y)| x * y).sum::<f64>();
    }
    sum
}

/// Discrete symplectic form of two solutions on the interior slice `level`,
/// the mean of the fluxes through the adjacent half levels.
///
/// For solutions of a self-adjoint operator the value does not depend on
/// the slice.
pub fn symplectic_form(op: &HyperbolicOperator, psi: &Section, phi: &Section, level: usize) -> Result<f64, GreenError> {
    if !op.is_self_adjoint() {
        return Err(GreenError::NotSelfAdjoint);
    }
    let g = op.grid();
    if psi.grid() != g || phi.grid() != g {
        return Err(GreenError::GridMismatch);
    }
    if level == 0 || level + 1 >= g.nt {
        return Err(GreenError::SliceNotInterior { level });
    }
    let (a, b) = (psi.values(), phi.values());
    Ok(0.5 * (half_level_flux(op, a, b, level - 1) + half_level_flux(op, a, b, level)))
}

/// `Σ ⟨f, h⟩ vol dt dx` with the fiber metric.
pub fn weighted_pairing(op: &HyperbolicOperator, f: &Section, h: &Section) -> Result<f64, GreenError> {
    let g = op.grid();
    if f.grid() != g || h.grid() != g {
        return Err(GreenError::GridMismatch);
    }
    let vh = op.weigh_raw(h.values());
    Ok(f.values().iter().zip(&vh).map(|(x, y)| x * y).sum())
}
