use std::fs;
use std::path::Path;

use anyhow::Context as _;
use moellerlab_geometry::{causal_future, PointSet};
use moellerlab_greenhyp::{
    exactness_check, propagator_symplectic_identity, symplectic_form, CauchyData, GreenSystem, DENSE_LIMIT,
};
use moellerlab_lattice::{smooth_step, Section, SpacetimeGrid};
use rand::Rng;

use super::{max_abs_diff, stream};
use crate::context::Context;
use crate::report::{Identity, SuiteReport};
use crate::sample::random_section;

const INVERSE: &str = "the retarded and advanced Green operators invert N";
const SUPPORT: &str = "G+ f is supported in the causal future of supp f, G- f in its past";
const EXACT: &str = "0 -> compact sections -> (N) -> compact sections -> (G) -> solutions -> (N) -> 0 is exact";
const SLICE: &str = "the symplectic form of two solutions does not depend on the Cauchy slice";
const PAIRING: &str = "the propagator pairing equals the symplectic form of the propagated sections";

pub fn run(ctx: &Context, report: &mut SuiteReport) -> anyhow::Result<()> {
    let g = *ctx.grid();
    let spec = &ctx.scenario.green;
    let metric = ctx.metric(ctx.scenario.chain.source())?;
    let op = ctx.operator(metric)?;
    let sys = GreenSystem::new(&op)?;
    let mut rng = ctx.rng(stream::GREEN);
    let m = g.nx * g.rank;

    // Each march solves all rows but the last (retarded) or first
    // (advanced); G± N h = h needs h to vanish where the march starts.
    let mut worst = [0.0_f64; 4];
    for _ in 0..spec.inputs {
        let f = random_section(&g, &mut rng, 0, g.nt - 1);
        let up = op.apply_raw(&sys.retarded_raw(f.values()));
        let down = op.apply_raw(&sys.advanced_raw(f.values()));
        let len = up.len();
        worst[0] = worst[0].max(max_abs_diff(&up[..len - m], &f.values()[..len - m]));
        worst[1] = worst[1].max(max_abs_diff(&down[m..], &f.values()[m..]));
        let h = random_section(&g, &mut rng, 1, g.nt - 2);
        let nh = op.apply_raw(h.values());
        worst[2] = worst[2].max(max_abs_diff(&sys.retarded_raw(&nh), h.values()));
        worst[3] = worst[3].max(max_abs_diff(&sys.advanced_raw(&nh), h.values()));
    }
    for (name, w) in ["N G+ f = f", "N G- f = f", "G+ N h = h", "G- N h = h"].into_iter().zip(worst) {
        report.push(Identity::at_most(name, INVERSE, w, 1e-10));
    }

    let past = metric.time_reversed();
    let (mut outside_plus, mut outside_minus) = (0usize, 0usize);
    for _ in 0..spec.sources {
        let f = sparse_source(&g, &mut rng);
        let sf = support(&f);
        let plus = support(&sys.green_plus(&f)?);
        let minus = support(&sys.green_minus(&f)?);
        outside_plus += outside(&plus, &dilate(&causal_future(metric, &sf), &g));
        outside_minus += outside(&minus, &dilate(&causal_future(&past, &sf), &g));
    }
    report.push(Identity::at_most("supp G+ f outside J+(supp f) + 1 cell", SUPPORT, outside_plus as f64, 0.0));
    report.push(Identity::at_most("supp G- f outside J-(supp f) + 1 cell", SUPPORT, outside_minus as f64, 0.0));

    let span = g.t_max - g.t_min;
    let chi = smooth_step(&g, g.t_min + 0.3 * span, g.t_min + 0.6 * span)?;
    let mut exact: Vec<Identity> = Vec::new();
    for _ in 0..spec.exactness {
        let h = random_section(&g, &mut rng, 3, g.nt - 4);
        let psi = random_solution(&sys, &mut rng)?;
        for (k, c) in exactness_check(&sys, &h, &psi, &chi, 1e-9)?.into_iter().enumerate() {
            match exact.get_mut(k) {
                Some(e) if e.residual >= c.residual => {}
                Some(e) => *e = Identity::from_check(c, EXACT),
                None => exact.push(Identity::from_check(c, EXACT)),
            }
        }
    }
    for e in exact {
        report.push(e);
    }

    let mut spread: f64 = 0.0;
    for _ in 0..spec.solutions {
        let a = random_solution(&sys, &mut rng)?;
        let b = random_solution(&sys, &mut rng)?;
        let values = (1..g.nt - 1).map(|n| symplectic_form(&op, &a, &b, n)).collect::<Result<Vec<_>, _>>()?;
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let size = values.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        spread = spread.max((hi - lo) / size);
    }
    report.push(Identity::at_most("symplectic form relative spread over interior slices", SLICE, spread, 1e-9));

    let mut pairing: f64 = 0.0;
    for _ in 0..spec.pairs {
        let f = random_section(&g, &mut rng, 3, g.nt - 4);
        let h = random_section(&g, &mut rng, 3, g.nt - 4);
        let level = rng.random_range(1..g.nt - 1);
        pairing = pairing.max(propagator_symplectic_identity(&sys, &f, &h, level, 1e-9)?.residual);
    }
    report.push(Identity::at_most("<f, G h> = sigma(G f, G h)", PAIRING, pairing, 1e-9));

    report.note(format!(
        "Klein-Gordon, mass {}, on {} over a {}x{} grid",
        ctx.scenario.operator.mass,
        ctx.scenario.chain.source(),
        g.nt,
        g.nx
    ));
    if ctx.scenario.dense_kernels {
        dense_kernels(ctx, &sys, report)?;
    }
    Ok(())
}

fn random_solution(sys: &GreenSystem, rng: &mut impl Rng) -> anyhow::Result<Section> {
    let g = *sys.grid();
    let m = g.nx * g.rank;
    let data = CauchyData {
        level: rng.random_range(1..g.nt - 1),
        value: (0..m).map(|_| rng.random_range(-1.0..1.0)).collect(),
        normal: (0..m).map(|_| rng.random_range(-1.0..1.0)).collect(),
    };
    Ok(sys.solve_cauchy(&data, None)?)
}

/// Three point sources away from the first and last two levels.
fn sparse_source(g: &SpacetimeGrid, rng: &mut impl Rng) -> Section {
    let mut f = Section::zeros(g);
    for _ in 0..3 {
        let n = rng.random_range(2..g.nt - 2);
        let j = rng.random_range(0..g.nx);
        f.set(n, j, 0, rng.random_range(-1.0..1.0));
    }
    f
}

fn support(s: &Section) -> PointSet {
    let g = s.grid();
    let mut out = PointSet::empty(g);
    for n in 0..g.nt {
        for j in 0..g.nx {
            if s.at(n, j).iter().any(|&v| v != 0.0) {
                out.insert(n, j);
            }
        }
    }
    out
}

/// Adds the eight neighbours of every point.
fn dilate(set: &PointSet, g: &SpacetimeGrid) -> PointSet {
    let mut out = PointSet::empty(g);
    for (n, j) in set.iter() {
        for m in n.saturating_sub(1)..=(n + 1).min(g.nt - 1) {
            for dj in -1isize..=1 {
                out.insert(m, g.wrap(j as isize + dj));
            }
        }
    }
    out
}

fn outside(set: &PointSet, hull: &PointSet) -> usize {
    set.iter().filter(|&(n, j)| !hull.contains(n, j)).count()
}

fn dense_kernels(ctx: &Context, sys: &GreenSystem, report: &mut SuiteReport) -> anyhow::Result<()> {
    let dim = sys.grid().points() * sys.grid().rank;
    if dim > DENSE_LIMIT {
        report.note(format!("dense kernels skipped: {dim} unknowns exceed {DENSE_LIMIT}"));
        return Ok(());
    }
    let Some(dir) = ctx.artifact_dir() else {
        report.note("dense kernels not written: no output directory");
        return Ok(());
    };
    fs::create_dir_all(&dir).with_context(|| dir.display().to_string())?;
    type Solve = fn(&GreenSystem, &[f64]) -> Vec<f64>;
    let kernels: [(&str, Solve); 3] = [
        ("green_plus.csv", GreenSystem::retarded_raw),
        ("green_minus.csv", GreenSystem::advanced_raw),
        ("causal.csv", GreenSystem::causal_raw),
    ];
    for (file, solve) in kernels {
        let columns: Vec<Vec<f64>> = (0..dim)
            .map(|q| {
                let mut e = vec![0.0; dim];
                e[q] = 1.0;
                solve(sys, &e)
            })
            .collect();
        write_matrix(&dir.join(file), &columns)?;
        report.note(format!("wrote {file} ({dim}x{dim}, column q = response to a unit source at q)"));
    }
    Ok(())
}

fn write_matrix(path: &Path, columns: &[Vec<f64>]) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path).with_context(|| path.display().to_string())?;
    for p in 0..columns.len() {
        w.write_record(columns.iter().map(|c| format!("{:e}", c[p])))?;
    }
    w.flush()?;
    Ok(())
}
