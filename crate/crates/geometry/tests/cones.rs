mod common;

use common::*;
use moellerlab_geometry::*;
use moellerlab_lattice::make_grid;
use rand::Rng;

#[test]
fn minkowski_classification() {
    let g = MetricField::minkowski(&small_grid());
    let c = |t, x| classify_vector(&g, 1, 2, TangentVector::new(t, x));
    assert_eq!(c(1.0, 0.0), CausalClass::TimelikeFuture);
    assert_eq!(c(-1.0, 0.3), CausalClass::TimelikePast);
    assert_eq!(c(0.0, 1.0), CausalClass::Spacelike);
    assert_eq!(c(1.0, 1.0), CausalClass::NullFuture);
    assert_eq!(c(-1.0, 1.0), CausalClass::NullPast);
    assert_eq!(c(0.0, 0.0), CausalClass::Spacelike);
}

#[test]
fn rotated_minkowski_swaps_roles() {
    let g = metric_preset("rotated-minkowski", &small_grid()).unwrap();
    assert_eq!(classify_vector(&g, 0, 0, TangentVector::new(1.0, 0.0)), CausalClass::Spacelike);
    assert_eq!(classify_vector(&g, 0, 0, TangentVector::new(0.0, 1.0)), CausalClass::TimelikeFuture);
}

#[test]
fn sharp_of_dt_in_minkowski() {
    let g = MetricField::minkowski(&small_grid());
    assert_eq!(musical_sharp(&g, 0, 0, Covector::new(1.0, 0.0)), TangentVector::new(-1.0, 0.0));
}

#[test]
fn flat_undoes_sharp() {
    let grid = small_grid();
    let mut r = rng(1);
    let g = random_metric(&grid, &mut r);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let w = Covector::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let (n, j) = (k % 4, (k / 4) % 4);
        let back = musical_flat(&g, n, j, musical_sharp(&g, n, j, w));
        worst = worst.max((back.t - w.t).abs()).max((back.x - w.x).abs());
    }
    assert!(worst <= 1e-12, "{worst}");
}

#[test]
fn inverse_matches_adjugate_oracle() {
    let grid = small_grid();
    let mut r = rng(2);
    let g = random_metric(&grid, &mut r);
    let inv = inverse_metric(&g);
    for (m, i) in g.components().iter().zip(inv.components()) {
        let a = nalgebra::Matrix2::new(m.tt, m.tx, m.tx, m.xx).try_inverse().unwrap();
        assert!((a[(0, 0)] - i.tt).abs() < 1e-12 * a.amax());
        assert!((a[(0, 1)] - i.tx).abs() < 1e-12 * a.amax());
        assert!((a[(1, 1)] - i.xx).abs() < 1e-12 * a.amax());
    }
}

#[test]
fn degenerate_metric_rejected() {
    let grid = small_grid();
    let r = MetricField::constant(&grid, SymTensor2::new(-1e-6, 0.0, 1e-6), TangentVector::new(1.0, 0.0));
    assert!(matches!(r, Err(GeometryError::Degenerate { .. })));
    let r = MetricField::constant(&grid, SymTensor2::new(1.0, 0.0, 1.0), TangentVector::new(1.0, 0.0));
    assert!(matches!(r, Err(GeometryError::NotLorentzian { .. })));
    let r = MetricField::constant(&grid, SymTensor2::minkowski(), TangentVector::new(0.0, 1.0));
    assert!(matches!(r, Err(GeometryError::OrientationNotTimelike { .. })));
}

#[test]
fn minkowski_cone_data() {
    let g = MetricField::minkowski(&small_grid());
    let c = cone_data(&g, 0, 0);
    assert!((c.slope_lo + 1.0).abs() < 1e-12 && (c.slope_hi - 1.0).abs() < 1e-12);
    assert_eq!(c.future, FutureSide::ForwardInTime);
    let r = metric_preset("rotated-minkowski", &small_grid()).unwrap();
    assert_eq!(cone_data(&r, 0, 0).future, FutureSide::AroundSpatialAxis);
    let past = g.time_reversed();
    assert_eq!(cone_data(&past, 0, 0).future, FutureSide::BackwardInTime);
}

#[test]
fn wider_cone_inclusion_matches_sampling() {
    let grid = small_grid();
    let g = MetricField::minkowski(&grid);
    let wide = MetricField::constant(&grid, SymTensor2::new(-4.0, 0.0, 1.0), TangentVector::new(1.0, 0.0)).unwrap();
    assert!(cone_inclusion(&g, &wide, 0, 0).unwrap());
    assert!(!cone_inclusion(&wide, &g, 0, 0).unwrap());
    assert!(sampled_inclusion(&g.at(0, 0), &wide.at(0, 0), 3600));
    assert!(!sampled_inclusion(&wide.at(0, 0), &g.at(0, 0), 3600));
    assert!(cone_inclusion(&g, &g, 2, 3).unwrap());
}

#[test]
fn rotated_pair_incomparable() {
    let grid = small_grid();
    let e0 = MetricField::minkowski(&grid);
    let e1 = metric_preset("rotated-minkowski", &grid).unwrap();
    assert!(!cone_inclusion(&e0, &e1, 0, 0).unwrap());
    assert!(!cone_inclusion(&e1, &e0, 0, 0).unwrap());
    assert_eq!(preceq(&e0, &e1).unwrap(), Precedence::Incomparable);
}

#[test]
fn inclusion_agrees_with_sampling_oracle() {
    let mut r = rng(3);
    let mut checked = 0;
    for _ in 0..2000 {
        let a = random_arc(&mut r);
        let b = random_arc(&mut r);
        // Stay clear of the sampling resolution.
        let margin = (b.half_width - a.half_width).abs() - wrap_angle(a.center - b.center).abs();
        let margin2 = (b.half_width - a.half_width).abs() - wrap_angle(a.center - b.center + std::f64::consts::PI).abs();
        if margin.abs() < 0.01 || margin2.abs() < 0.01 {
            continue;
        }
        let g = tensor_for(a, &mut r);
        let g2 = tensor_for(b, &mut r);
        let grid = make_grid(4, 4, 0.0, 1.0, 1.0, 1).unwrap();
        let f = MetricField::constant(&grid, g, TangentVector::from_angle(a.center)).unwrap();
        let f2 = MetricField::constant(&grid, g2, TangentVector::from_angle(b.center)).unwrap();
        assert_eq!(cone_inclusion(&f, &f2, 0, 0).unwrap(), sampled_inclusion(&g, &g2, 3600));
        checked += 1;
    }
    assert!(checked > 1000);
}

#[test]
fn conformal_factor_keeps_cones() {
    let grid = make_grid(8, 8, 0.0, 1.0, 1.0, 1).unwrap();
    let mut r = rng(4);
    let g = random_metric(&grid, &mut r);
    let mu = moellerlab_lattice::ScalarField::from_fn(&grid, moellerlab_lattice::Range::Positive, |t, x| {
        0.3 + 2.0 * (t + x).sin().abs()
    })
    .unwrap();
    let h = g.conformal(&mu).unwrap();
    assert_eq!(preceq(&g, &h).unwrap(), Precedence::Aligned);
    assert_eq!(preceq(&h, &g).unwrap(), Precedence::Aligned);
}

#[test]
fn reversed_orientation_detected() {
    let grid = small_grid();
    let g = MetricField::minkowski(&grid);
    assert_eq!(preceq(&g, &g.time_reversed()).unwrap(), Precedence::Reversed);
}

#[test]
fn one_way_comparison() {
    let grid = small_grid();
    let g = MetricField::minkowski(&grid);
    let narrow = MetricField::constant(&grid, SymTensor2::new(-1.0, 0.0, 4.0), TangentVector::new(1.0, 0.0)).unwrap();
    assert_eq!(preceq(&narrow, &g).unwrap(), Precedence::Aligned);
    assert_eq!(preceq(&g, &narrow).unwrap(), Precedence::Incomparable);
    assert!(sampled_inclusion(&narrow.at(0, 0), &g.at(0, 0), 3600));
}

#[test]
fn inverse_metrics_reverse_the_order() {
    let grid = small_grid();
    let mut r = rng(5);
    for k in 0..500 {
        let (g, g2) = if k % 2 == 0 {
            comparable_pair(&grid, &mut r)
        } else {
            (random_metric(&grid, &mut r), random_metric(&grid, &mut r))
        };
        let direct = preceq(&g, &g2).unwrap().holds();
        let dual = preceq(&inverse_metric(&g2), &inverse_metric(&g)).unwrap().holds();
        assert_eq!(direct, dual);
    }
}

#[test]
fn preset_parsing() {
    let grid = make_grid(8, 8, -1.0, 1.0, 2.0, 1).unwrap();
    for name in [
        "minkowski",
        "rotated-minkowski",
        "conformal(0.3)",
        "scaled(2)",
        "warped(0.2)",
        "ultrastatic(2.5)",
        "squeezed(0.25)",
        "boosted(0.5)",
        "time-reversed(conformal(0.3))",
    ] {
        metric_preset(name, &grid).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    assert!(matches!(metric_preset("flat", &grid), Err(GeometryError::UnknownPreset(_))));
    assert!(metric_preset("conformal(x)", &grid).is_err());
    let rev = metric_preset("time-reversed(minkowski)", &grid).unwrap();
    assert_eq!(rev.future_at(0, 0), TangentVector::new(-1.0, 0.0));
}

#[test]
fn metric_csv_has_one_row_per_point() {
    let grid = small_grid();
    let mut buf = Vec::new();
    MetricField::minkowski(&grid).write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 1 + grid.points());
    assert!(text.starts_with("n,j,t,x,g_tt,g_tx,g_xx,future_t,future_x"));
}
