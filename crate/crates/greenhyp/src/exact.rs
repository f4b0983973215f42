use moellerlab_lattice::{ScalarField, Section};

use crate::green::GreenSystem;
use crate::report::{max_abs, max_abs_diff, CheckReport};
use crate::symplectic::{symplectic_form, weighted_pairing};
use crate::GreenError;

/// Zeroes the first and last time level.
fn drop_boundary_rows(f: &mut [f64], level_len: usize) {
    let len = f.len();
    f[..level_len].iter_mut().for_each(|v| *v = 0.0);
    f[len - level_len..].iter_mut().for_each(|v| *v = 0.0);
}

/// Source `N(χΨ)` on interior rows, whose causal propagation rebuilds `Ψ`.
pub fn reconstruction_source(system: &GreenSystem, psi: &Section, cutoff: &ScalarField) -> Result<Section, GreenError> {
    let op = system.operator();
    let g = op.grid();
    if psi.grid() != g {
        return Err(GreenError::GridMismatch);
    }
    let cut = psi.mul_scalar(cutoff)?;
    let mut f = op.apply_raw(cut.values());
    drop_boundary_rows(&mut f, g.nx * g.rank);
    Ok(Section::from_values(g, f)?)
}

/// The four exactness residuals for compactly supported `h` (zero on the
/// first three and last three levels), a homogeneous solution `Ψ` and a cutoff
/// `χ` that is 0 near the start of the window and 1 near its end.
/// Residuals are relative to the size of the reconstructed section.
pub fn exactness_check(system: &GreenSystem, h: &Section, psi: &Section, cutoff: &ScalarField, tolerance: f64) -> Result<Vec<CheckReport>, GreenError> {
    let op = system.operator();
    let nh = Section::from_values(op.grid(), op.apply_raw(h.values()))?;
    let scale_h = h.max_abs().max(f64::MIN_POSITIVE);

    let recovered = system.green_plus(&nh)?;
    let injective = recovered.max_abs_diff(h)? / scale_h;

    let gnh = system.causal(&nh)?;
    let complex = gnh.max_abs() / scale_h;

    let f_psi = reconstruction_source(system, psi, cutoff)?;
    let rebuilt = system.causal_raw(f_psi.values());
    let surjective = max_abs_diff(&rebuilt, psi.values()) / psi.max_abs().max(f64::MIN_POSITIVE);

    let preimage = system.retarded_raw(nh.values());
    let kernel = op.interior_residual(&preimage, nh.values()) / max_abs(nh.values()).max(f64::MIN_POSITIVE);

    Ok(vec![
        CheckReport::new("G+ N h = h (N injective on compact supports)", injective, tolerance),
        CheckReport::new("G N h = 0", complex, tolerance),
        CheckReport::new("G N(chi Psi) = Psi", surjective, tolerance),
        CheckReport::new("G f = 0 => f = N G+ f", kernel, tolerance),
    ])
}

/// `σ(G f, G h)` against `−Σ ⟨f, G h⟩ vol`, on the slice `level`.
pub fn propagator_symplectic_identity(system: &GreenSystem, f: &Section, h: &Section, level: usize, tolerance: f64) -> Result<CheckReport, GreenError> {
    let op = system.operator();
    let gf = system.causal(f)?;
    let gh = system.causal(h)?;
    let lhs = symplectic_form(op, &gf, &gh, level)?;
    let rhs = -weighted_pairing(op, f, &gh)?;
    Ok(CheckReport::new("sigma(G f, G h) = -<f, G h>", (lhs - rhs).abs(), tolerance))
}

/// Both relations between the retarded operator of `N` and the advanced
/// operator of `N† = V⁻¹NᵀV`: `Σ⟨G⁻_{N†}f', f⟩ = Σ⟨f', G⁺_N f⟩` and its
/// mirror with the roles of past and future swapped.
pub fn green_adjoint_relation(system: &GreenSystem, f_prime: &Section, f: &Section, tolerance: f64) -> Result<CheckReport, GreenError> {
    let op = system.operator();
    let adj = GreenSystem::new(&op.adjoint())?;
    let lhs1 = weighted_pairing(op, &Section::from_values(op.grid(), adj.advanced_raw(f_prime.values()))?, f)?;
    let rhs1 = weighted_pairing(op, f_prime, &Section::from_values(op.grid(), system.retarded_raw(f.values()))?)?;
    let lhs2 = weighted_pairing(op, &Section::from_values(op.grid(), adj.retarded_raw(f_prime.values()))?, f)?;
    let rhs2 = weighted_pairing(op, f_prime, &Section::from_values(op.grid(), system.advanced_raw(f.values()))?)?;
    let scale = lhs1.abs().max(rhs1.abs()).max(lhs2.abs()).max(rhs2.abs()).max(1.0);
    let residual = (lhs1 - rhs1).abs().max((lhs2 - rhs2).abs()) / scale;
    Ok(CheckReport::new("<G-_{N+} f', f> = <f', G+_N f>", residual, tolerance))
}
