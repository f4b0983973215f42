mod common;

use common::*;
use moellerlab_geometry::*;
use moellerlab_lattice::{make_grid, SpacetimeGrid};

fn grid() -> SpacetimeGrid {
    make_grid(16, 16, 0.0, 1.0, 1.0, 1).unwrap()
}

fn revalidate(c: &ParacausalChain) {
    ParacausalChain::new(c.metrics().to_vec(), c.links().to_vec()).unwrap();
}

#[test]
fn rotated_minkowski_needs_four_metrics() {
    let g = grid();
    let e0 = MetricField::minkowski(&g);
    let e1 = metric_preset("rotated-minkowski", &g).unwrap();
    match build_chain(&e0, &e1).unwrap() {
        ChainSearch::Found { chain, strategy } => {
            assert_eq!(strategy, ChainStrategy::Widening);
            assert!(chain.len() <= 4);
            assert_eq!(chain.source(), &e0);
            assert_eq!(chain.target(), &e1);
            revalidate(&chain);
        }
        other => panic!("expected a chain, got {other:?}"),
    }
}

#[test]
fn reversed_cylinder_has_no_chain() {
    let g = grid();
    let e0 = MetricField::minkowski(&g);
    match build_chain(&e0, &e0.time_reversed()).unwrap() {
        ChainSearch::OrientationReversed(cert) => {
            assert_eq!(cert.points, g.points());
            assert!(cert.rotation_has_closed_causal_curve);
        }
        other => panic!("expected a reversal certificate, got {other:?}"),
    }
}

#[test]
fn conformal_pair_is_direct() {
    let g = grid();
    let e0 = MetricField::minkowski(&g);
    let c = metric_preset("conformal(0.4)", &g).unwrap();
    let search = build_chain(&e0, &c).unwrap();
    let chain = search.chain().unwrap();
    assert_eq!(chain.len(), 2);
}

#[test]
fn shared_time_function_route() {
    let g = grid();
    let a = metric_preset("boosted(0.6)", &g).unwrap();
    let b = metric_preset("boosted(-0.6)", &g).unwrap();
    assert!(cones_intersect_future(&a, &b).unwrap().is_err());
    match build_chain(&a, &b).unwrap() {
        ChainSearch::Found { chain, strategy } => {
            assert_eq!(strategy, ChainStrategy::SharedTime);
            assert_eq!(chain.len(), 3);
            revalidate(&chain);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn symmetric_on_corpus() {
    let g = grid();
    let names = [
        "minkowski",
        "rotated-minkowski",
        "conformal(0.3)",
        "warped(0.2)",
        "squeezed(0.25)",
        "boosted(0.6)",
        "boosted(-0.6)",
        "time-reversed(minkowski)",
    ];
    let metrics: Vec<_> = names.iter().map(|n| metric_preset(n, &g).unwrap()).collect();
    for (i, a) in metrics.iter().enumerate() {
        for (k, b) in metrics.iter().enumerate() {
            let ab = build_chain(a, b).unwrap();
            let ba = build_chain(b, a).unwrap();
            assert_eq!(ab.chain().is_some(), ba.chain().is_some(), "{} vs {}", names[i], names[k]);
            if let Some(c) = ab.chain() {
                revalidate(c);
                revalidate(&c.reversed());
            }
        }
    }
}

#[test]
fn random_comparable_pairs_chain_directly() {
    let g = small_grid();
    let mut r = rng(20);
    for _ in 0..50 {
        let (a, b) = comparable_pair(&g, &mut r);
        let s = build_chain(&b, &a).unwrap();
        assert_eq!(s.chain().unwrap().links(), &[LinkDirection::Backward]);
    }
}

#[test]
fn broken_links_rejected() {
    let g = small_grid();
    let e0 = MetricField::minkowski(&g);
    let e1 = metric_preset("rotated-minkowski", &g).unwrap();
    let err = ParacausalChain::new(vec![e0.clone(), e1], vec![LinkDirection::Forward]).unwrap_err();
    assert_eq!(err, GeometryError::BrokenLink { link: 0 });
    assert!(ParacausalChain::new(vec![e0], vec![]).is_err());
}

#[test]
fn alpha_identity_on_ultrastatic() {
    let g = grid();
    let u = metric_preset("ultrastatic(2.0)", &g).unwrap();
    let one = moellerlab_lattice::ScalarField::constant(&g, 1.0, moellerlab_lattice::Range::Positive).unwrap();
    let same = alpha_rescale(&u.orthogonal_split().unwrap(), &one).unwrap();
    assert_eq!(same.components(), u.components());
}

#[test]
fn tuned_alpha_meets_boosted_cones() {
    let g = grid();
    let base = metric_preset("warped(0.3)", &g).unwrap();
    let target = metric_preset("boosted(0.8)", &g).unwrap();
    assert!(cones_intersect_future(&metric_preset("squeezed(0.05)", &g).unwrap(), &target).unwrap().is_err());
    let alpha = tune_alpha(&base, &target).unwrap();
    let strip = alpha_strip_values(&base, &target).unwrap();
    for (n, s) in strip.iter().enumerate().take(g.nt) {
        assert!(alpha.get(n, 0) <= s * (1.0 + 1e-15));
    }
    let ga = alpha_rescale(&base.orthogonal_split().unwrap(), &alpha).unwrap();
    assert!(cones_intersect_future(&ga, &target).unwrap().is_ok());
}

#[test]
fn tune_alpha_needs_spacelike_slices() {
    let g = grid();
    let base = MetricField::minkowski(&g);
    let rot = metric_preset("rotated-minkowski", &g).unwrap();
    assert!(matches!(tune_alpha(&base, &rot), Err(GeometryError::SlicesNotSpacelike { .. })));
    assert!(matches!(tune_alpha(&rot, &base), Err(GeometryError::NotSplitting { .. })));
}
