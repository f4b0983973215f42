mod common;

use common::*;
use moellerlab_geometry::*;
use moellerlab_lattice::{Range, ScalarField};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reflexive_and_antisymmetric_up_to_equal_cones(seed in any::<u64>()) {
        let grid = small_grid();
        let mut r = rng(seed);
        let g = random_metric(&grid, &mut r);
        let g2 = random_metric(&grid, &mut r);
        prop_assert_eq!(preceq(&g, &g).unwrap(), Precedence::Aligned);
        if preceq(&g, &g2).unwrap().holds() && preceq(&g2, &g).unwrap().holds() {
            for p in 0..grid.points() {
                let a = g.components()[p].timelike_arc();
                let b = g2.components()[p].timelike_arc();
                prop_assert!((a.half_width - b.half_width).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn transitive_on_nested_triples(seed in any::<u64>()) {
        let grid = small_grid();
        let mut r = rng(seed);
        let (a, b) = comparable_pair(&grid, &mut r);
        let chi = ScalarField::constant(&grid, 0.5, Range::Unit).unwrap();
        let mid = convex_combination(&a, &b, &chi).unwrap();
        prop_assert_eq!(preceq(&a, &mid).unwrap(), Precedence::Aligned);
        prop_assert_eq!(preceq(&mid, &b).unwrap(), Precedence::Aligned);
        prop_assert_eq!(preceq(&a, &b).unwrap(), Precedence::Aligned);
    }

    #[test]
    fn squeezing_is_monotone(seed in any::<u64>(), a1 in 0.01f64..1.0, a2 in 0.01f64..1.0) {
        let grid = small_grid();
        let mut r = rng(seed);
        let g = random_metric(&grid, &mut r);
        let x = VectorField::new(&grid, g.orientation().to_vec()).unwrap();
        let (lo, hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
        let s = |a| squeeze_metric(&g, &x, &ScalarField::constant(&grid, a, Range::Positive).unwrap()).unwrap();
        prop_assert_eq!(preceq(&s(lo), &s(hi)).unwrap(), Precedence::Aligned);
    }

    #[test]
    fn sandwich_for_any_cutoff(seed in any::<u64>(), c in proptest::collection::vec(0.0f64..=1.0, 16)) {
        let grid = small_grid();
        let mut r = rng(seed);
        let (g, g2) = comparable_pair(&grid, &mut r);
        let chi = ScalarField::new(&grid, c, Range::Unit).unwrap();
        for blend in [convex_combination, sharp_interpolation] {
            let b = blend(&g, &g2, &chi).unwrap();
            prop_assert_eq!(preceq(&g, &b).unwrap(), Precedence::Aligned);
            prop_assert_eq!(preceq(&b, &g2).unwrap(), Precedence::Aligned);
        }
    }
}
