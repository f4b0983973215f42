use std::f64::consts::PI;
use std::fs;

use anyhow::Context as _;
use moellerlab_geometry::MetricField;
use moellerlab_greenhyp::{build_operator, CauchyData, GreenSystem, LowerOrder};
use moellerlab_hadamard::{hypothesis_study, observed_orders, pullback_study, study_chain, RefinementStudy};
use moellerlab_lattice::{make_grid, FiberMetric};

use super::hadamard::note_study;
use crate::config::Study;
use crate::context::Context;
use crate::report::{Identity, SuiteReport};

const WAVE: &str = "the leapfrog scheme is second-order accurate";
const HADAMARD: &str = "Hadamard residuals vanish under refinement at the scheme's order";

/// Largest error over `[0, π/2]` of the wave equation with data at rest,
/// `u₀ = exp(cos x)`, against d'Alembert's formula. Courant number 0.8.
pub fn dalembert_error(nx: usize) -> anyhow::Result<(f64, f64)> {
    let steps = nx * 5 / 16;
    let dt = PI / 2.0 / steps as f64;
    let g = make_grid(steps + 2, nx, -dt, PI / 2.0, 2.0 * PI, 1)?;
    let op = build_operator(&MetricField::minkowski(&g), &LowerOrder::zero(&g), &FiberMetric::identity(&g))?;
    let sys = GreenSystem::new(&op)?;
    let u0 = |x: f64| x.cos().exp();
    let exact = |t: f64, x: f64| 0.5 * (u0(x - t) + u0(x + t));
    let data = CauchyData { level: 1, value: (0..nx).map(|j| u0(g.x(j))).collect(), normal: vec![0.0; nx] };
    let psi = sys.solve_cauchy(&data, None)?;
    let mut worst: f64 = 0.0;
    for n in 1..g.nt {
        for j in 0..nx {
            worst = worst.max((psi.get(n, j, 0) - exact(g.t(n), g.x(j))).abs());
        }
    }
    Ok((dt, worst))
}

fn wave_study(grids: &[usize]) -> anyhow::Result<RefinementStudy> {
    let (steps, errors): (Vec<f64>, Vec<f64>) = grids.iter().map(|&nx| dalembert_error(nx)).collect::<anyhow::Result<Vec<_>>>()?.into_iter().unzip();
    Ok(RefinementStudy::new("wave equation vs d'Alembert", grids.to_vec(), steps, errors))
}

pub fn run(ctx: &Context, report: &mut SuiteReport) -> anyhow::Result<()> {
    let spec = &ctx.scenario.convergence;
    let mut studies = Vec::new();
    for study in &spec.studies {
        match study {
            Study::Dalembert => {
                let s = wave_study(&spec.grids)?;
                push_orders(report, &s, WAVE, 1.9);
                studies.push(s);
            }
            Study::Hadamard => {
                let levels = &ctx.scenario.hadamard.levels;
                let hyp = hypothesis_study(levels)?;
                push_orders(report, &hyp, HADAMARD, 1.9);
                let pulled = pullback_study(levels, study_chain)?;
                push_orders(report, &pulled.bisolution, HADAMARD, 1.5);
                push_orders(report, &pulled.ccr, HADAMARD, 1.5);
                studies.extend([hyp, pulled.bisolution, pulled.ccr]);
            }
        }
    }
    for s in &studies {
        note_study(report, s);
    }
    if let Some(dir) = ctx.artifact_dir() {
        fs::create_dir_all(&dir).with_context(|| dir.display().to_string())?;
        let path = dir.join("convergence.csv");
        let mut w = csv::Writer::from_path(&path).with_context(|| path.display().to_string())?;
        w.write_record(["quantity", "level", "step", "error"])?;
        for s in &studies {
            for ((n, h), e) in s.levels.iter().zip(&s.steps).zip(&s.errors) {
                w.write_record([s.quantity.clone(), n.to_string(), format!("{h:e}"), format!("{e:e}")])?;
            }
        }
        w.flush()?;
        report.note("wrote convergence.csv");
    }
    Ok(())
}

fn push_orders(report: &mut SuiteReport, s: &RefinementStudy, claim: &str, minimum: f64) {
    let orders = observed_orders(&s.steps, &s.errors);
    for (k, o) in orders.into_iter().enumerate() {
        report.push(Identity::at_least(format!("{}: order {}->{}", s.quantity, s.levels[k], s.levels[k + 1]), claim, o, minimum));
    }
}
