mod common;

use common::*;
use moellerlab_hadamard::{
    bisolution_check, ccr_hypothesis_check, default_columns, hadamard_verdict, lattice_vacuum, smoothness_proxy, HadamardError,
    SampledKernel, UltrastaticVacuum, Dispersion, PROXY_FOR,
};
use proptest::prelude::*;

#[test]
fn reference_against_itself_has_zero_ratios() {
    let (m, op) = flat(64);
    let nu = lattice_vacuum(m.grid(), 1.0).unwrap().kernel().unwrap();
    let v = hadamard_verdict(&nu, &nu, &op).unwrap();
    assert_eq!(v.proxy_for, PROXY_FOR);
    assert!(v.proxy.lag_ratios.iter().all(|r| r.ratio == 0.0));
    assert!(v.proxy.derivatives.iter().all(|d| d.growth == 0.0));
    assert!(v.pass, "{v:?}");
}

#[test]
fn smooth_bump_passes_everywhere() {
    let (m, op) = flat(64);
    let nu = lattice_vacuum(m.grid(), 1.0).unwrap().kernel().unwrap();
    let bumped = nu.add(&smooth_bump(m.grid(), 0.1)).unwrap();
    let ccr = ccr_hypothesis_check(&bumped, &op).unwrap();
    assert!(ccr.sup_norm > 1e-2 && ccr.pass, "{ccr:?}");
    let bis = bisolution_check(&bumped, &op).unwrap();
    assert!(bis.sup_norm > 1e-2 && bis.pass, "{bis:?}");
    let v = hadamard_verdict(&bumped, &nu, &op).unwrap();
    assert!(v.proxy.tail_ratio < 1e-6 && v.proxy.max_growth < 1.5, "{:?}", v.proxy);
    assert!(v.kernel.pass && v.pass, "{:?}", v.kernel);
}

#[test]
fn white_noise_fails_through_derivative_growth() {
    let (m, op) = flat(64);
    let nu = lattice_vacuum(m.grid(), 1.0).unwrap().kernel().unwrap();
    for seed in 0..3 {
        let rough = nu.add(&white_noise(m.grid(), 1e-3, seed)).unwrap();
        let v = hadamard_verdict(&rough, &nu, &op).unwrap();
        println!("seed {seed}: tail {:e}, growth {:?}", v.proxy.tail_ratio, v.proxy.derivatives);
        // the flat spectrum carries little energy next to the vacuum tail;
        // the third time difference grows like 2³
        assert!(!v.proxy.growth_pass && v.proxy.max_growth > 6.0);
        assert!(!v.proxy.pass && !v.pass);
        assert!(!v.ccr.pass, "{:?}", v.ccr.smoothness);
        assert!(!v.bisolution.left.pass && !v.bisolution.right.pass);
    }
}

#[test]
fn different_masses_differ_in_the_spatial_tail() {
    let (m, op) = flat(64);
    let g = m.grid();
    let reference = lattice_vacuum(g, 1.0).unwrap().kernel().unwrap();
    let heavy = UltrastaticVacuum::new(g, 1.0, 2.0, Dispersion::Leapfrog).unwrap().kernel().unwrap();
    let v = hadamard_verdict(&heavy, &reference, &op).unwrap();
    println!("tail {:e}, growth {:?}", v.proxy.tail_ratio, v.proxy.derivatives);
    assert!(v.proxy.growth_pass);
    assert!(!v.proxy.tail_pass && v.proxy.tail_ratio > 0.1);
    assert!(!v.pass);
}

#[test]
fn sample_shapes_are_checked() {
    let g = grid(16, 8);
    let nu = lattice_vacuum(&g, 1.0).unwrap().kernel().unwrap();
    assert!(matches!(SampledKernel::of(&nu, &[]), Err(HadamardError::EmptySample)));
    assert!(matches!(SampledKernel::of(&nu, &[g.points()]), Err(HadamardError::GridMismatch)));
    let a = SampledKernel::of(&nu, &default_columns(&g)).unwrap();
    let b = SampledKernel::of(&nu, &[3]).unwrap();
    assert!(matches!(smoothness_proxy(&a, &b), Err(HadamardError::GridMismatch)));
    assert!(matches!(a.restrict(0..=g.nt), Err(HadamardError::GridMismatch)));
    assert_eq!(a.restrict(2..=5).unwrap().level_count(), 4);
    let other = lattice_vacuum(&grid(17, 8), 1.0).unwrap().kernel().unwrap();
    assert!(matches!(nu.add(&other), Err(HadamardError::GridMismatch)));
}

#[test]
fn default_columns_sit_on_interior_levels() {
    for (nt, nx) in [(64, 16), (9, 4), (256, 32)] {
        let g = grid(nt, nx);
        let cols = default_columns(&g);
        assert_eq!(cols.len(), 7 * nx.min(8));
        assert!(cols.iter().all(|&q| q >= g.nx && q < (g.nt - 1) * g.nx));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ratios_stay_in_the_unit_interval(seed in 0u64..1000, amp in -8.0f64..2.0, eps in -4.0f64..0.0) {
        let g = grid(17, 8);
        let nu = lattice_vacuum(&g, 1.0).unwrap().kernel().unwrap();
        let noisy = nu.add(&white_noise(&g, 10f64.powf(amp), seed)).unwrap().add(&smooth_bump(&g, 10f64.powf(eps))).unwrap();
        let cols = default_columns(&g);
        let d = SampledKernel::of(&noisy, &cols).unwrap().sub(&SampledKernel::of(&nu, &cols).unwrap()).unwrap();
        let r = smoothness_proxy(&d, &SampledKernel::of(&nu, &cols).unwrap()).unwrap();
        prop_assert!(r.lag_ratios.iter().all(|l| (0.0..=1.0).contains(&l.ratio)));
        prop_assert!((0.0..=1.0).contains(&r.tail_ratio));
        prop_assert!(r.derivatives.iter().all(|d| d.growth >= 0.0));
        prop_assert_eq!(r.pass, r.tail_pass && r.growth_pass);
    }
}
