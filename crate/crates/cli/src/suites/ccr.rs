use std::sync::Arc;

use moellerlab_ccr::{
    dominated_table, pullback_state, quasifree_npoint, random_element, star_isomorphism, state_eval, CcrAlgebra,
    FieldDictionary, QuasifreeState, TwoPointKernel, COMMUTATOR_TOLERANCE, STATE_TOLERANCE,
};
use moellerlab_greenhyp::CausalPropagator;
use moellerlab_moller::LevelRange;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use super::stream;
use crate::context::Context;
use crate::report::{Identity, SuiteReport};
use crate::sample::{random_section, random_table};

const CONFLUENT: &str = "normal ordering modulo the commutation relations is confluent, so the product is associative";
const ISO: &str = "the Møller operator induces a *-isomorphism between the CCR algebras";
const WICK: &str = "a quasifree state's n-point function is the sum over pairings of two-point functions";
const POSITIVE: &str = "a state is positive, also after pull-back along a Møller operator";

pub fn run(ctx: &Context, report: &mut SuiteReport) -> anyhow::Result<()> {
    let spec = &ctx.scenario.ccr;
    let mut rng = ctx.rng(stream::CCR);

    let alg = CcrAlgebra::new(random_table(spec.generators, 2.0, &mut rng));
    let mut assoc: f64 = 0.0;
    for _ in 0..spec.triples {
        let a = random_element(&mut rng, spec.generators, 2, 3);
        let b = random_element(&mut rng, spec.generators, 2, 3);
        let c = random_element(&mut rng, spec.generators, 2, 3);
        let left = alg.multiply(&alg.multiply(&a, &b)?, &c)?;
        let right = alg.multiply(&a, &alg.multiply(&b, &c)?)?;
        assoc = assoc.max(left.distance(&right) / left.max_abs().max(1.0));
    }
    report.push(Identity::at_most("(ab)c = a(bc) in normal form", CONFLUENT, assoc, 1e-12));

    let table = random_table(6, 2.0, &mut rng);
    let b = DMatrix::from_fn(6, 6, |_, _| rng.random_range(-1.0..1.0));
    let w = dominated_table(table.matrix(), 0.1) + (&b * b.transpose()).map(|v| Complex64::new(v, 0.0));
    let state = QuasifreeState::new(w, table, STATE_TOLERANCE)?;
    let mut wick: f64 = 0.0;
    let mut pairings_ok = true;
    for _ in 0..spec.npoint {
        let idx: Vec<usize> = (0..6).map(|_| rng.random_range(0..6)).collect();
        let fast = quasifree_npoint(&state, &idx)?;
        let (slow, count) = pairing_sum(state.table(), &idx);
        pairings_ok &= count == 15;
        wick = wick.max((fast - slow).norm() / slow.norm().max(1.0));
    }
    report.push(Identity::at_most("6-point function vs sum over 15 pairings", WICK, wick, 1e-12));
    report.push(Identity::holds("permutation oracle finds 15 pairings", WICK, pairings_ok));

    let r = ctx.moller()?;
    let g = *r.grid();
    let (first, last) = ctx.scenario.dictionary_levels(&g);
    let mut dict_rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.scenario.dictionary_seed());
    let sections = (0..ctx.scenario.dictionary.count).map(|_| random_section(&g, &mut dict_rng, first, last)).collect();
    let target = FieldDictionary::new(r.target(), sections)?;
    let iso = star_isomorphism(r, &target, COMMUTATOR_TOLERANCE)?;
    report.push(Identity::at_most("commutator table of R-images vs target table", ISO, iso.residual(), COMMUTATOR_TOLERANCE));
    let sample: Vec<_> = (0..20).map(|_| random_element(&mut rng, target.len(), 2, 3)).collect();
    for c in iso.homomorphism_checks(&sample, 1e-9)? {
        report.push(Identity::from_check(c, ISO));
    }

    let prop = CausalPropagator::new(r.source())?;
    let kernel = Arc::new(TwoPointKernel::positive_part(&prop, LevelRange { first: 2, last: g.nt - 3 })?);
    let before = QuasifreeState::from_kernel(kernel, iso.source(), STATE_TOLERANCE)?;
    report.push(Identity::at_least("min w(a*a) before pull-back", POSITIVE, min_square(&before, spec.elements, &mut rng)?, -1e-12));
    let after = pullback_state(&before, &iso, 1e-8)?;
    report.push(Identity::at_least("min w(a*a) after pull-back", POSITIVE, min_square(&after, spec.elements, &mut rng)?, -1e-12));
    report.note(format!(
        "{} dictionary sections on levels {first}..={last}; reference state from the positive-frequency part of G on the source",
        target.len()
    ));
    Ok(())
}

/// Smallest `ω(a*a)` over random elements of degree at most 2, relative to
/// `max(|ω(a*a)|, 1)`.
fn min_square(state: &QuasifreeState, count: usize, rng: &mut impl Rng) -> anyhow::Result<f64> {
    let alg = CcrAlgebra::new(state.pairing().clone());
    let mut worst = f64::INFINITY;
    for _ in 0..count {
        let a = random_element(rng, state.len(), 2, 4);
        let v = state_eval(state, &alg.multiply(&alg.star(&a)?, &a)?)?;
        worst = worst.min(v.re / v.norm().max(1.0));
    }
    Ok(worst)
}

/// Sum over perfect matchings found by running through every permutation
/// and keeping those listing pairs in increasing order.
fn pairing_sum(w: &DMatrix<Complex64>, idx: &[usize]) -> (Complex64, usize) {
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
    (sum, count)
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
