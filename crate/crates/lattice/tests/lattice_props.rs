use moellerlab_lattice::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid8(rank: usize) -> SpacetimeGrid {
    make_grid(8, 8, 0.0, 1.0, 1.0, rank).unwrap()
}

fn random_section(g: &SpacetimeGrid, rng: &mut ChaCha8Rng) -> Section {
    Section::from_values(g, (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

#[test]
fn single_cell_quadrature() {
    let g = grid8(1);
    let mut f = Section::zeros(&g);
    f.set(3, 5, 0, 1.0);
    let vol = ScalarField::constant(&g, 1.0, Range::Positive).unwrap();
    let k = FiberMetric::identity(&g);
    let ip = weighted_inner_product(&f, &f, &vol, &k).unwrap();
    assert!((ip - g.dt * g.dx).abs() < 1e-16);
}

#[test]
fn disjoint_supports_are_orthogonal() {
    let g = grid8(2);
    let mut f = Section::zeros(&g);
    let mut h = Section::zeros(&g);
    f.set(2, 1, 0, 3.0);
    h.set(5, 1, 1, -2.0);
    let vol = ScalarField::constant(&g, 2.0, Range::Positive).unwrap();
    let k = FiberMetric::identity(&g);
    assert_eq!(weighted_inner_product(&f, &h, &vol, &k).unwrap(), 0.0);
}

#[test]
fn matches_brute_force_sum() {
    let g = grid8(2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_section(&g, &mut rng);
    let h = random_section(&g, &mut rng);
    let vol = ScalarField::from_fn(&g, Range::Positive, |t, x| 1.0 + t * t + 0.5 * x).unwrap();
    let k = FiberMetric::new(
        MatrixField::from_fn(&g, |t, _| nalgebra::DMatrix::from_row_slice(2, 2, &[2.0, 0.3 * t, 0.3 * t, 1.0])).unwrap(),
    )
    .unwrap();
    let mut expect = 0.0;
    for n in 0..8 {
        for j in 0..8 {
            let km = k.get(n, j);
            for a in 0..2 {
                for b in 0..2 {
                    expect += f.get(n, j, a) * km[(a, b)] * h.get(n, j, b) * vol.get(n, j) * g.dt * g.dx;
                }
            }
        }
    }
    let got = weighted_inner_product(&f, &h, &vol, &k).unwrap();
    assert!((got - expect).abs() < 1e-13 * expect.abs().max(1.0));
}

#[test]
fn positive_on_random_sections() {
    let g = grid8(2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let vol = ScalarField::from_fn(&g, Range::Positive, |t, _| 0.5 + t).unwrap();
    let k = FiberMetric::identity(&g);
    for _ in 0..100 {
        let f = random_section(&g, &mut rng);
        assert!(weighted_inner_product(&f, &f, &vol, &k).unwrap() > 0.0);
    }
}

#[test]
fn shape_mismatch_is_reported() {
    let f = Section::zeros(&grid8(1));
    let h = Section::zeros(&make_grid(8, 16, 0.0, 1.0, 1.0, 1).unwrap());
    let vol = ScalarField::constant(&grid8(1), 1.0, Range::Positive).unwrap();
    let k = FiberMetric::identity(&grid8(1));
    assert!(weighted_inner_product(&f, &h, &vol, &k).is_err());
    assert!(Section::from_values(&grid8(1), vec![0.0; 5]).is_err());
}

#[test]
fn indefinite_fiber_metric_rejected() {
    let g = grid8(2);
    let m = nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let f = MatrixField::constant(&g, m).unwrap();
    assert!(matches!(FiberMetric::new(f), Err(LatticeError::NotPositiveDefinite { .. })));
}

#[test]
fn range_constraints_enforced() {
    let g = grid8(1);
    assert!(ScalarField::constant(&g, 1.5, Range::Unit).is_err());
    assert!(ScalarField::constant(&g, 0.0, Range::Positive).is_err());
    assert!(ScalarField::constant(&g, -3.0, Range::Any).is_ok());
}

#[test]
fn compact_window_must_be_interior_and_honest() {
    let g = grid8(1);
    let mut f = Section::zeros(&g);
    f.set(3, 2, 0, 1.0);
    assert!(f.clone().with_window(2, 4).is_ok());
    assert!(matches!(f.clone().with_window(4, 5), Err(LatticeError::SupportOutsideWindow { level: 3 })));
    assert!(f.clone().with_window(0, 4).is_err());
    assert!(f.clone().with_window(2, 7).is_err());
    assert_eq!(f.support_levels(), Some(TimeWindow { first: 3, last: 3 }));
}

#[test]
fn envelope_and_csv_round_trip() {
    let g = make_grid(5, 4, -1.0, 1.0, 2.0, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_section(&g, &mut rng);
    let env = Envelope::from_section(&f, "source");
    assert_eq!(env.values.len(), 5);
    let back = Envelope::from_json(&env.to_json()).unwrap().to_section().unwrap();
    assert_eq!(back, f);

    let mut buf = Vec::new();
    f.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(Section::read_csv(&g, buf.as_slice()).unwrap(), f);

    let chi = smooth_step(&g.with_rank(1).unwrap(), -0.5, 0.5).unwrap();
    let env = Envelope::from_scalar(&chi, "cutoff");
    assert_eq!(env.to_scalar(Range::Unit).unwrap(), chi);
}

proptest! {
    #[test]
    fn inner_product_bilinear_and_symmetric(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let g = grid8(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f1 = random_section(&g, &mut rng);
        let f2 = random_section(&g, &mut rng);
        let h = random_section(&g, &mut rng);
        let vol = ScalarField::from_fn(&g, Range::Positive, |t, x| 1.0 + t + x * x).unwrap();
        let k = FiberMetric::new(MatrixField::constant(&g, nalgebra::DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0])).unwrap()).unwrap();
        let ip = |u: &Section, v: &Section| weighted_inner_product(u, v, &vol, &k).unwrap();
        let combo = f1.scale(a).add(&f2.scale(b)).unwrap();
        let lhs = ip(&combo, &h);
        let rhs = a * ip(&f1, &h) + b * ip(&f2, &h);
        prop_assert!((lhs - rhs).abs() < 1e-12);
        prop_assert!((ip(&f1, &h) - ip(&h, &f1)).abs() < 1e-14);
    }

    #[test]
    fn smooth_step_monotone(t0 in 0.05f64..0.45, w in 0.05f64..0.5, nt in 8usize..200) {
        let g = make_grid(nt, 4, 0.0, 1.0, 1.0, 1).unwrap();
        let t1 = (t0 + w).min(0.95);
        let chi = smooth_step(&g, t0, t1).unwrap();
        for j in 0..4 {
            for n in 1..nt {
                prop_assert!(chi.get(n, j) >= chi.get(n - 1, j));
            }
        }
        for n in 0..nt {
            let t = g.t(n);
            if t < t0 { prop_assert_eq!(chi.get(n, 0), 0.0); }
            if t > t1 { prop_assert_eq!(chi.get(n, 0), 1.0); }
        }
    }

    #[test]
    fn step_profile_symmetric(s in 0.0f64..1.0) {
        prop_assert!((step_profile(s) + step_profile(1.0 - s) - 1.0).abs() < 1e-14);
    }
}
