#![allow(dead_code)]

pub mod fock;

use moellerlab_ccr::PairingTable;
use moellerlab_geometry::{metric_preset, LinkDirection, MetricField, ParacausalChain};
use moellerlab_lattice::{make_grid, Section, SpacetimeGrid};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// `nt × nx` window `[0, 0.5·(nt−1)·dx]` on the circle of length 2π.
pub fn grid(nt: usize, nx: usize) -> SpacetimeGrid {
    let dx = 2.0 * PI / nx as f64;
    make_grid(nt, nx, 0.0, 0.5 * dx * (nt - 1) as f64, 2.0 * PI, 1).unwrap()
}

pub fn preset(name: &str, g: &SpacetimeGrid) -> MetricField {
    metric_preset(name, g).unwrap()
}

pub fn chain(g: &SpacetimeGrid, names: &[&str], links: &[LinkDirection]) -> ParacausalChain {
    ParacausalChain::new(names.iter().map(|n| preset(n, g)).collect(), links.to_vec()).unwrap()
}

pub fn flat_to_conformal(g: &SpacetimeGrid) -> ParacausalChain {
    chain(g, &["minkowski", "conformal(0.5)"], &[LinkDirection::Forward])
}

/// Random sections supported on levels `first..=last`.
pub fn sections(g: &SpacetimeGrid, count: usize, first: usize, last: usize, seed: u64) -> Vec<Section> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut s = Section::zeros(g);
            for n in first..=last {
                for v in s.level_mut(n) {
                    *v = rng.random_range(-1.0..1.0);
                }
            }
            s
        })
        .collect()
}

/// Random antisymmetric table with entries in `[-scale, scale]`.
pub fn random_table(d: usize, scale: f64, seed: u64) -> PairingTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i + 1..d {
            let v = rng.random_range(-scale..scale);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    PairingTable::new(m, 0.0).unwrap()
}

/// Sum over all orderings of the positions that form pairings with
/// `p_{2k} < p_{2k+1}` and increasing first members.
pub fn brute_force_pairings(w: &DMatrix<Complex64>, idx: &[usize]) -> Complex64 {
    let n = idx.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut count = 0;
    permute(&mut perm, 0, &mut |p| {
        let ordered = (0..n / 2).all(|k| p[2 * k] < p[2 * k + 1]) && (1..n / 2).all(|k| p[2 * k - 2] < p[2 * k]);
        if ordered {
            count += 1;
            sum += (0..n / 2).map(|k| w[(idx[p[2 * k]], idx[p[2 * k + 1]])]).product::<Complex64>();
        }
    });
    let expected: usize = (1..n).step_by(2).product();
    assert_eq!(count, expected.max(1));
    sum
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}
