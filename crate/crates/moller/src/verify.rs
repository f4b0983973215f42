use moellerlab_greenhyp::{symplectic_form, CausalPropagator, CheckReport, GreenSystem, DENSE_LIMIT};
use moellerlab_lattice::{Section, SpacetimeGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::operator::MollerOperator;
use crate::step::{dense_of, MollerLink};
use crate::MollerError;

/// Random test sections: `compact` vanish on the first three and last
/// three levels, `general` are nonzero everywhere.
#[derive(Debug, Clone)]
pub struct Dictionary {
    pub compact: Vec<Section>,
    pub general: Vec<Section>,
}

impl Dictionary {
    pub fn random(grid: &SpacetimeGrid, count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |first: usize, last: usize| {
            let mut s = Section::zeros(grid);
            for n in first..=last {
                for v in s.level_mut(n) {
                    *v = rng.random_range(-1.0..1.0);
                }
            }
            s
        };
        let compact = (0..count).map(|_| draw(3, grid.nt - 4)).collect();
        let general = (0..count).map(|_| draw(0, grid.nt - 1)).collect();
        Self { compact, general }
    }
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn diff_on(a: &[f64], b: &[f64], range: std::ops::Range<usize>) -> f64 {
    a[range.clone()].iter().zip(&b[range]).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Output equals input on the levels each factor leaves alone.
pub fn identity_regions(r: &MollerOperator, dict: &Dictionary, tolerance: f64) -> CheckReport {
    let g = r.grid();
    let m = g.nx * g.rank;
    let mut worst: f64 = 0.0;
    for step in r.steps().iter().chain(r.inverse_steps()) {
        let keep = step.unchanged_levels();
        if keep.is_empty() {
            continue;
        }
        for f in &dict.general {
            let out = step.apply_raw(f.values());
            let d = diff_on(&out, f.values(), keep.first * m..(keep.last + 1) * m);
            worst = worst.max(d / f.max_abs().max(1.0));
        }
    }
    CheckReport::new("R+ f = f before t0, R- f = f after t1", worst, tolerance)
}

/// `(A − N₀)f` vanishes before the transition, `(B − A)f` after it.
pub fn difference_supports(link: &MollerLink, dict: &Dictionary) -> Result<CheckReport, MollerError> {
    let g = link.source().grid();
    let tr = link.transition();
    let mut worst: f64 = 0.0;
    for f in &dict.general {
        let plus = link.plus_difference(f)?;
        let minus = link.minus_difference(f)?;
        for n in 0..g.nt {
            if n + 1 < tr.first {
                worst = worst.max(max_abs(plus.level(n)));
            }
            if n > tr.last + 1 {
                worst = worst.max(max_abs(minus.level(n)));
            }
        }
    }
    Ok(CheckReport::new("supp (A - N0) f after t0, supp (B - A) f before t1", worst, 0.0))
}

/// `A R₊ = N₀` on rows `0..nt−1` and `B R₋ = A` on rows `1..nt`, for any
/// admissible scale profile.
pub fn intertwine_link(link: &MollerLink, dict: &Dictionary, tolerance: f64) -> Vec<CheckReport> {
    let g = link.source().grid();
    let (m, len) = (g.nx * g.rank, g.len());
    let (a, b, n0) = (link.scaled_blend(), link.scaled_target(), link.source());
    let (plus, minus) = (link.plus(), link.minus());
    let (mut first, mut second): (f64, f64) = (0.0, 0.0);
    for f in &dict.general {
        let want = n0.apply_raw(f.values());
        let got = a.apply_raw(&plus.apply_raw(f.values()));
        first = first.max(diff_on(&got, &want, 0..len - m) / max_abs(&want).max(1.0));
        let want = a.apply_raw(f.values());
        let got = b.apply_raw(&minus.apply_raw(f.values()));
        second = second.max(diff_on(&got, &want, m..len) / max_abs(&want).max(1.0));
    }
    vec![
        CheckReport::new("rho N_chi R+ = N0", first, tolerance),
        CheckReport::new("rho' N1 R- = rho N_chi", second, tolerance),
    ]
}

/// `c'N'R f = N f` on interior rows.
pub fn intertwine(r: &MollerOperator, dict: &Dictionary, tolerance: f64) -> CheckReport {
    let g = r.grid();
    let (m, len) = (g.nx * g.rank, g.len());
    let c = r.volume_ratio().values();
    let rank = g.rank;
    let mut worst: f64 = 0.0;
    for f in &dict.general {
        let want = r.source().apply_raw(f.values());
        let mut got = r.target().apply_raw(&r.apply_raw(f.values()));
        for (i, v) in got.iter_mut().enumerate() {
            *v *= c[i / rank];
        }
        worst = worst.max(diff_on(&got, &want, m..len - m) / max_abs(&want).max(1.0));
    }
    CheckReport::new("c' N' R = N", worst, tolerance)
}

/// `R G_N R† = G_{N'}` on compactly supported inputs: as dense kernels when
/// `dense` is set, otherwise by action on the dictionary.
pub fn propagator_intertwining(r: &MollerOperator, dict: &Dictionary, tolerance: f64, dense: bool) -> Result<CheckReport, MollerError> {
    let g = r.grid();
    let m = g.nx * g.rank;
    let identity = "R G_N R^dagger = G_N'";
    if dense {
        let gn = CausalPropagator::new(r.source())?;
        let gn2 = CausalPropagator::new(r.target())?;
        let rd = r.to_dense()?;
        let adj = dense_of(r.len(), |h| r.apply_adjoint_raw(h))?;
        let k = &rd * gn.kernel() * &adj - gn2.kernel();
        let cols = 2 * m..r.len() - 2 * m;
        let worst = k.columns_range(cols).amax() / gn2.kernel().amax().max(1.0);
        return Ok(CheckReport::new(identity, worst, tolerance));
    }
    let gs = GreenSystem::new(r.source())?;
    let gs2 = GreenSystem::new(r.target())?;
    let mut worst: f64 = 0.0;
    for h in &dict.compact {
        let want = gs2.causal_raw(h.values());
        let got = r.apply_raw(&gs.causal_raw(&r.apply_adjoint_raw(h.values())));
        worst = worst.max(max_abs(&sub(&got, &want)) / max_abs(&want).max(1.0));
    }
    Ok(CheckReport::new(identity, worst, tolerance))
}

/// `R† N' f = N f` for compactly supported `f`.
pub fn adjoint_intertwining(r: &MollerOperator, dict: &Dictionary, tolerance: f64) -> CheckReport {
    let mut worst: f64 = 0.0;
    for f in &dict.compact {
        let want = r.source().apply_raw(f.values());
        let got = r.apply_adjoint_raw(&r.target().apply_raw(f.values()));
        worst = worst.max(max_abs(&sub(&got, &want)) / max_abs(&want).max(1.0));
    }
    CheckReport::new("R^dagger N' f = N f", worst, tolerance)
}

/// `σ^{N'}(RΨ, RΦ) = σ^N(Ψ, Φ)` for `Ψ = G f`, `Φ = G h`, relative error.
pub fn symplectic_preservation(r: &MollerOperator, dict: &Dictionary, pairs: usize, tolerance: f64) -> Result<CheckReport, MollerError> {
    let g = *r.grid();
    let gs = GreenSystem::new(r.source())?;
    let mut worst: f64 = 0.0;
    let n = dict.compact.len();
    for i in 0..pairs.min(n / 2) {
        let psi = Section::from_values(&g, gs.causal_raw(dict.compact[2 * i].values()))?;
        let phi = Section::from_values(&g, gs.causal_raw(dict.compact[2 * i + 1].values()))?;
        let rpsi = r.apply(&psi)?;
        let rphi = r.apply(&phi)?;
        for level in [1, g.nt / 2, g.nt - 2] {
            let before = symplectic_form(r.source(), &psi, &phi, level)?;
            let after = symplectic_form(r.target(), &rpsi, &rphi, level)?;
            worst = worst.max((after - before).abs() / before.abs().max(f64::MIN_POSITIVE));
        }
    }
    Ok(CheckReport::new("sigma'(R Psi, R Phi) = sigma(Psi, Phi)", worst, tolerance))
}

/// `R⁻¹R f = f` and `RR⁻¹ f = f`.
pub fn round_trip(r: &MollerOperator, dict: &Dictionary, tolerance: f64) -> CheckReport {
    let mut worst: f64 = 0.0;
    for f in &dict.general {
        let scale = f.max_abs().max(1.0);
        let a = r.apply_inverse_raw(&r.apply_raw(f.values()));
        let b = r.apply_raw(&r.apply_inverse_raw(f.values()));
        worst = worst.max(max_abs(&sub(&a, f.values())) / scale).max(max_abs(&sub(&b, f.values())) / scale);
    }
    CheckReport::new("R^-1 R = R R^-1 = Id", worst, tolerance)
}

/// `G⁺_{N₀}(A − N₀)G⁺_A = G⁺_{N₀} − G⁺_A` and
/// `G⁻_B(B − A)G⁻_A = G⁻_A − G⁻_B` as dense kernels.
pub fn telescoping(link: &MollerLink, tolerance: f64) -> Result<Vec<CheckReport>, MollerError> {
    let dim = link.source().len();
    let (g0, ga, gb) = (link.green_source(), link.green_blend(), link.green_target());
    let (n0, a, b) = (link.source(), link.scaled_blend(), link.scaled_target());
    let lhs = dense_of(dim, |f| {
        let u = ga.retarded_raw(f);
        g0.retarded_raw(&sub(&a.apply_raw(&u), &n0.apply_raw(&u)))
    })?;
    let rhs = dense_of(dim, |f| sub(&g0.retarded_raw(f), &ga.retarded_raw(f)))?;
    let plus = (&lhs - &rhs).amax() / rhs.amax().max(1.0);
    let lhs = dense_of(dim, |f| {
        let u = ga.advanced_raw(f);
        gb.advanced_raw(&sub(&b.apply_raw(&u), &a.apply_raw(&u)))
    })?;
    let rhs = dense_of(dim, |f| sub(&ga.advanced_raw(f), &gb.advanced_raw(f)))?;
    let minus = (&lhs - &rhs).amax() / rhs.amax().max(1.0);
    Ok(vec![
        CheckReport::new("G+_N0 (A - N0) G+_A = G+_N0 - G+_A", plus, tolerance),
        CheckReport::new("G-_B (B - A) G-_A = G-_A - G-_B", minus, tolerance),
    ])
}

/// Image of a solution together with its residual against the target
/// equation `N'(RΨ) = f/c'`.
#[derive(Debug, Clone)]
pub struct SolutionImage {
    pub image: Section,
    pub residual: f64,
}

/// Relative residual a section must meet to count as a solution.
pub const SOLUTION_TOLERANCE: f64 = 1e-8;

/// Maps `Ψ` with `NΨ = f` (`f = 0` when `source` is `None`) to `RΨ` and
/// checks `N'(RΨ) = f/c'` on interior rows.
pub fn restrict_to_solutions(r: &MollerOperator, psi: &Section, source: Option<&Section>) -> Result<SolutionImage, MollerError> {
    let g = *r.grid();
    let rank = g.rank;
    let zero;
    let f = match source {
        Some(f) => f,
        None => {
            zero = Section::zeros(&g);
            &zero
        }
    };
    let scale = psi.max_abs().max(f.max_abs()).max(f64::MIN_POSITIVE);
    let input = r.source().interior_residual(psi.values(), f.values()) / scale;
    if input > SOLUTION_TOLERANCE {
        return Err(MollerError::NotASolution { residual: input });
    }
    let image = r.apply(psi)?;
    let c = r.volume_ratio().values();
    let target_source: Vec<f64> = f.values().iter().enumerate().map(|(i, v)| v / c[i / rank]).collect();
    let residual = r.target().interior_residual(image.values(), &target_source) / scale;
    Ok(SolutionImage { image, residual })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyOptions {
    pub dictionary: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub identity_tolerance: f64,
    pub symplectic_tolerance: f64,
    pub symplectic_pairs: usize,
    /// Use dense kernels for the propagator identity; `None` decides by size.
    pub dense: Option<bool>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            dictionary: 64,
            seed: 7,
            tolerance: 1e-9,
            identity_tolerance: 1e-10,
            symplectic_tolerance: 1e-8,
            symplectic_pairs: 10,
            dense: None,
        }
    }
}

/// Largest grid, in points, verified with dense kernels by default.
pub const DENSE_VERIFY_POINTS: usize = 400;

#[derive(Debug, Clone, Serialize)]
pub struct MollerReport {
    pub checks: Vec<CheckReport>,
}

impl MollerReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Every identity a Møller operator should satisfy, for `R` and for `R⁻¹`.
pub fn verify_moller(r: &MollerOperator, options: &VerifyOptions) -> Result<MollerReport, MollerError> {
    let g = r.grid();
    let dict = Dictionary::random(g, options.dictionary, options.seed);
    let dense = options.dense.unwrap_or(g.points() <= DENSE_VERIFY_POINTS) && r.len() <= DENSE_LIMIT;
    let tol = options.tolerance;
    let mut checks = vec![
        propagator_intertwining(r, &dict, tol, dense)?,
        intertwine(r, &dict, tol),
        adjoint_intertwining(r, &dict, tol),
        identity_regions(r, &dict, options.identity_tolerance),
        symplectic_preservation(r, &dict, options.symplectic_pairs, options.symplectic_tolerance)?,
        round_trip(r, &dict, tol),
    ];
    let inv = r.inverse();
    for mut c in [propagator_intertwining(&inv, &dict, tol, dense)?, intertwine(&inv, &dict, tol), adjoint_intertwining(&inv, &dict, tol)] {
        c.identity = format!("inverse: {}", c.identity);
        checks.push(c);
    }
    Ok(MollerReport { checks })
}
