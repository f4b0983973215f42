mod common;

use common::*;
use moellerlab_geometry::{metric_preset, LinkDirection, ParacausalChain};
use moellerlab_hadamard::{
    default_columns, hadamard_verdict, kernel_check, lattice_vacuum, pullback_kernel, pullback_study, reference_vacuum, study_chain,
    study_grid, ultrastatic_vacuum, Dispersion, HadamardError, SampledKernel, STUDY_LEVELS,
};
use moellerlab_moller::{canonical_operator, compose_canonical, MollerOperator};

fn max_diff(a: &SampledKernel, b: &SampledKernel) -> f64 {
    a.sub(b).unwrap().sup_norm()
}

#[test]
fn identity_leaves_the_kernel_unchanged() {
    let (m, op) = flat(64);
    let nu = ultrastatic_vacuum(m.grid(), 1.0).unwrap().kernel().unwrap();
    let id = MollerOperator::identity(&op).unwrap();
    assert_eq!(pullback_kernel(&nu, &id).unwrap(), nu);
    let chain = ParacausalChain::new(vec![m.clone(), m.clone()], vec![LinkDirection::Forward]).unwrap();
    let degenerate = compose_canonical(&chain).unwrap();
    assert_eq!(pullback_kernel(&nu, &degenerate).unwrap(), nu);
}

#[test]
fn round_trip_returns_the_kernel() {
    let g = study_grid(128).unwrap();
    let r = compose_canonical(&study_chain(&g).unwrap()).unwrap();
    let nu = reference_vacuum(r.source().metric(), 1.0, Dispersion::Continuum).unwrap().kernel().unwrap();
    let back = pullback_kernel(&pullback_kernel(&nu, &r).unwrap(), &r.inverse()).unwrap();
    let cols = default_columns(&g);
    let a = SampledKernel::of(&nu, &cols).unwrap();
    let diff = max_diff(&a, &SampledKernel::of(&back, &cols).unwrap());
    assert!(diff <= 1e-9 * a.sup_norm(), "{diff:e}");
}

#[test]
fn pulled_back_conclusions_converge() {
    let study = pullback_study(&STUDY_LEVELS, study_chain).unwrap();
    println!("{study:?}");
    assert!(study.kernel_pass);
    assert!(study.ccr.min_order >= 1.5, "{:?}", study.ccr);
    assert!(study.bisolution.min_order >= 1.5, "{:?}", study.bisolution);
}

#[test]
fn flat_to_conformal_pull_back_converges() {
    let chain = |g: &moellerlab_lattice::SpacetimeGrid| -> Result<ParacausalChain, HadamardError> {
        let metrics = vec![metric_preset("minkowski", g)?, metric_preset("conformal(0.5)", g)?];
        Ok(ParacausalChain::new(metrics, vec![LinkDirection::Forward])?)
    };
    let study = pullback_study(&STUDY_LEVELS, chain).unwrap();
    assert!(study.kernel_pass);
    assert!(study.ccr.min_order >= 1.5, "{:?}", study.ccr);
    assert!(study.bisolution.min_order >= 1.5, "{:?}", study.bisolution);
}

/// The exact lattice vacuum pulled back along the study chain, compared
/// with the target's own lattice vacuum. The difference is a smooth
/// Bogoliubov admixture whose spatial tail shrinks as the circle is
/// resolved; at 16 sites it still sits above the threshold.
#[test]
fn pulled_back_lattice_vacuum_approaches_the_reference() {
    let mut tails = Vec::new();
    for nx in [16, 32, 64] {
        let g = grid(129, nx);
        let r = compose_canonical(&study_chain(&g).unwrap()).unwrap();
        let nu = lattice_vacuum(&g, 1.0).unwrap().kernel().unwrap();
        let pulled = pullback_kernel(&nu, &r).unwrap();
        let reference = reference_vacuum(r.target().metric(), 1.0, Dispersion::Leapfrog).unwrap().kernel().unwrap();
        let v = hadamard_verdict(&pulled, &reference, r.target()).unwrap();
        println!("nx {nx}: tail {:e}, growth {}", v.proxy.tail_ratio, v.proxy.max_growth);
        assert!(v.kernel.pass && v.ccr.pass && v.bisolution.pass);
        assert!(v.ccr.sup_norm < 1e-10 && v.bisolution.sup_norm < 1e-8, "{nx}");
        assert!(v.proxy.growth_pass);
        assert_eq!(v.pass, nx >= 32, "{nx}: {:e}", v.proxy.tail_ratio);
        tails.push(v.proxy.tail_ratio);
    }
    assert!(tails.windows(2).all(|t| t[1] < t[0] / 10.0), "{tails:?}");
}

#[test]
fn pulled_back_kernel_is_hermitian_and_lives_on_the_target() {
    let g = study_grid(64).unwrap();
    let r = compose_canonical(&study_chain(&g).unwrap()).unwrap();
    let nu = ultrastatic_vacuum(&g, 1.0).unwrap().kernel().unwrap();
    let pulled = pullback_kernel(&nu, &r).unwrap();
    let report = kernel_check(&pulled, r.target()).unwrap();
    assert!(report.pass && report.finite, "{report:?}");
    let other = ultrastatic_vacuum(&grid(32, 16), 1.0).unwrap().kernel().unwrap();
    assert!(matches!(pullback_kernel(&other, &r), Err(HadamardError::GridMismatch)));
    let op = canonical_operator(&metric_preset("minkowski", &g).unwrap()).unwrap();
    assert!(kernel_check(&pulled, &op).is_ok());
}
