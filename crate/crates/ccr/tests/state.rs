mod common;

use common::*;
use moellerlab_ccr::{
    dominated_table, quasifree_npoint, random_element, state_eval, AlgebraElement, CcrAlgebra, CcrError, PairingTable,
    QuasifreeState, STATE_TOLERANCE,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `λ𝕀 + iG/2 + BBᵀ` for a random `B`.
fn random_state(table: &PairingTable, seed: u64) -> QuasifreeState {
    let d = table.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    let w = dominated_table(table.matrix(), 0.1) + (&b * b.transpose()).map(|v| Complex64::new(v, 0.0));
    QuasifreeState::new(w, table.clone(), STATE_TOLERANCE).unwrap()
}

#[test]
fn low_order_moments() {
    let table = random_table(5, 1.0, 1);
    let s = random_state(&table, 2);
    let w = s.table();
    assert_eq!(quasifree_npoint(&s, &[]).unwrap(), Complex64::new(1.0, 0.0));
    assert_eq!(quasifree_npoint(&s, &[3]).unwrap(), Complex64::new(0.0, 0.0));
    assert_eq!(quasifree_npoint(&s, &[0, 2, 4]).unwrap(), Complex64::new(0.0, 0.0));
    assert_eq!(quasifree_npoint(&s, &[1, 4]).unwrap(), w[(1, 4)]);
    let four = quasifree_npoint(&s, &[0, 1, 2, 3]).unwrap();
    let expected = w[(0, 1)] * w[(2, 3)] + w[(0, 2)] * w[(1, 3)] + w[(0, 3)] * w[(1, 2)];
    assert!((four - expected).norm() < 1e-14);
    assert!(quasifree_npoint(&s, &[0, 5]).is_err());
}

#[test]
fn six_point_function_matches_partition_enumeration() {
    let table = random_table(6, 2.0, 3);
    let s = random_state(&table, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let idx: Vec<usize> = (0..6).map(|_| rng.random_range(0..6)).collect();
        let fast = quasifree_npoint(&s, &idx).unwrap();
        let slow = brute_force_pairings(s.table(), &idx);
        assert!((fast - slow).norm() <= 1e-12 * slow.norm().max(1.0), "{idx:?}");
    }
    let slow = brute_force_pairings(s.table(), &[0, 1, 2, 3, 4, 5, 0, 1]);
    let fast = quasifree_npoint(&s, &[0, 1, 2, 3, 4, 5, 0, 1]).unwrap();
    assert!((fast - slow).norm() <= 1e-12 * slow.norm());
}

#[test]
fn unit_and_commutator_expectations() {
    let table = random_table(4, 1.0, 6);
    let s = random_state(&table, 7);
    let alg = CcrAlgebra::new(table.clone());
    assert_eq!(state_eval(&s, &AlgebraElement::unit()).unwrap(), Complex64::new(1.0, 0.0));
    let c = alg.commutator(&alg.field(1).unwrap(), &alg.field(2).unwrap()).unwrap();
    assert!((state_eval(&s, &c).unwrap() - I * table.get(1, 2)).norm() < 1e-14);
}

#[test]
fn expectations_do_not_depend_on_ordering_the_words() {
    let table = random_table(5, 1.5, 8);
    let s = random_state(&table, 9);
    let alg = CcrAlgebra::new(table);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let len = rng.random_range(0..=6);
        let word: Vec<usize> = (0..len).map(|_| rng.random_range(0..5)).collect();
        let raw = quasifree_npoint(&s, &word).unwrap();
        let ordered = state_eval(&s, &alg.word(&word).unwrap()).unwrap();
        assert!((raw - ordered).norm() <= 1e-12 * raw.norm().max(1.0), "{word:?}");
    }
}

#[test]
fn squares_have_nonnegative_expectation() {
    let table = random_table(8, 1.0, 11);
    let s = random_state(&table, 12);
    let alg = CcrAlgebra::new(table);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let a = random_element(&mut rng, 8, 2, 5);
        let v = state_eval(&s, &alg.multiply(&alg.star(&a).unwrap(), &a).unwrap()).unwrap();
        assert!(v.re >= -1e-12 * v.norm().max(1.0), "{v}");
        assert!(v.im.abs() <= 1e-12 * v.norm().max(1.0), "{v}");
    }
}

#[test]
fn invalid_tables_are_rejected() {
    let table = random_table(4, 1.0, 14);
    let good = random_state(&table, 15).table().clone();
    let mut skew = good.clone();
    skew[(0, 1)] += Complex64::new(1e-3, 0.0);
    assert!(matches!(QuasifreeState::new(skew, table.clone(), STATE_TOLERANCE), Err(CcrError::NotHermitian { .. })));
    let mut wrong = good.clone();
    wrong[(0, 1)] += I * 1e-3;
    wrong[(1, 0)] -= I * 1e-3;
    assert!(matches!(QuasifreeState::new(wrong, table.clone(), STATE_TOLERANCE), Err(CcrError::NotCcrCompatible { .. })));
    let bare = table.matrix().map(|g| I * (0.5 * g));
    assert!(matches!(QuasifreeState::new(bare, table.clone(), STATE_TOLERANCE), Err(CcrError::NotPositive { .. })));
    let small = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
    assert!(matches!(QuasifreeState::new(small, table, STATE_TOLERANCE), Err(CcrError::Shape { .. })));
}

#[test]
fn two_point_table_exports_as_csv() {
    let table = random_table(3, 1.0, 16);
    let s = random_state(&table, 17);
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 10);
    let row: Vec<f64> = text.lines().nth(2).unwrap().split(',').skip(2).map(|v| v.parse().unwrap()).collect();
    assert_eq!(Complex64::new(row[0], row[1]), s.table()[(0, 1)]);
}
