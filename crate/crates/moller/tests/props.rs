mod common;

use common::*;
use moellerlab_moller::{compose_canonical, MollerOperator};
use proptest::prelude::*;
use std::sync::OnceLock;

fn operator() -> &'static MollerOperator {
    static R: OnceLock<MollerOperator> = OnceLock::new();
    R.get_or_init(|| compose_canonical(&zigzag(&grid(12, 8))).unwrap())
}

fn section() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 96)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moller_map_is_linear(f in section(), h in section(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let r = operator();
        let mixed: Vec<f64> = f.iter().zip(&h).map(|(x, y)| a * x + b * y).collect();
        let lhs = r.apply_raw(&mixed);
        let (rf, rh) = (r.apply_raw(&f), r.apply_raw(&h));
        let rhs: Vec<f64> = rf.iter().zip(&rh).map(|(x, y)| a * x + b * y).collect();
        let scale = rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!(max_abs_diff(&lhs, &rhs) <= 1e-12 * scale);
    }

    #[test]
    fn inverse_undoes_the_map(f in section()) {
        let r = operator();
        prop_assert!(max_abs_diff(&r.apply_inverse_raw(&r.apply_raw(&f)), &f) <= 1e-9);
        prop_assert!(max_abs_diff(&r.apply_raw(&r.apply_inverse_raw(&f)), &f) <= 1e-9);
    }

    #[test]
    fn adjoint_pairs_like_a_transpose(f in section(), h in section()) {
        let r = operator();
        let lhs: f64 = r.source().weigh_raw(&r.apply_adjoint_raw(&h)).iter().zip(&f).map(|(x, y)| x * y).sum();
        let rhs: f64 = r.target().weigh_raw(&h).iter().zip(&r.apply_raw(&f)).map(|(x, y)| x * y).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1.0));
    }
}
