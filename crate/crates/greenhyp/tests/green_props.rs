mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn retarded_solve_inverts_any_operator(seed in any::<u64>(), nt in 6usize..14, nx in 4usize..10, rank in 1usize..3) {
        let g = grid(nt, nx, rank);
        let mut rng = rng(seed);
        let op = random_operator(&g, &mut rng);
        let sys = system(&op);
        let h = random_section(&g, &mut rng, 1, nt - 1);
        let back = sys.retarded_raw(&op.apply_raw(h.values()));
        prop_assert!(max_abs_diff(&back, h.values()) <= 1e-9 * h.max_abs().max(1.0));
    }

    #[test]
    fn causal_solve_is_linear(seed in any::<u64>(), a in -3.0f64..3.0) {
        let g = grid(10, 8, 1);
        let mut rng = rng(seed);
        let sys = system(&klein_gordon(&g, 1.0));
        let f = random_section(&g, &mut rng, 0, 9);
        let h = random_section(&g, &mut rng, 0, 9);
        let combo: Vec<f64> = f.values().iter().zip(h.values()).map(|(x, y)| a * x + y).collect();
        let lhs = sys.causal_raw(&combo);
        let (gf, gh) = (sys.causal_raw(f.values()), sys.causal_raw(h.values()));
        let rhs: Vec<f64> = gf.iter().zip(&gh).map(|(x, y)| a * x + y).collect();
        let scale = rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!(max_abs_diff(&lhs, &rhs) <= 1e-10 * scale);
    }

    #[test]
    fn symmetrized_operators_are_weight_symmetric(seed in any::<u64>(), rank in 1usize..3) {
        let g = grid(8, 6, rank);
        let mut rng = rng(seed);
        let sym = random_operator(&g, &mut rng).symmetrize();
        let vn = sym.weight_dense() * sym.to_dense();
        prop_assert!((&vn - vn.transpose()).amax() <= 1e-12 * vn.amax());
    }
}
