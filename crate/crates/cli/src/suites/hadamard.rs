use moellerlab_geometry::MetricField;
use moellerlab_hadamard::{
    bisolution_check, ccr_hypothesis_check, hadamard_verdict, hypothesis_study, lattice_vacuum, pullback_study,
    smooth_perturbation, study_chain, study_grid, white_noise, RefinementStudy, PROXY_FOR,
};
use moellerlab_moller::{canonical_operator, CANONICAL_MASS};

use super::stream;
use crate::context::Context;
use crate::report::{Identity, SuiteReport};

const HYPOTHESIS: &str = "the reference vacuum's antisymmetric part differs from iG by a smooth kernel";
const CONCLUSIONS: &str = "the pulled-back state is a well-defined bisolution with the target commutator, up to smooth errors";
const PROXY: &str = "the smoothness proxy accepts smooth kernel perturbations and rejects rough ones";
const EXACT: &str = "the leapfrog mode sum is an exact lattice bisolution with the exact commutator";

pub fn run(ctx: &Context, report: &mut SuiteReport) -> anyhow::Result<()> {
    report.proxy_for = Some(PROXY_FOR.to_owned());
    let levels = &ctx.scenario.hadamard.levels;

    let hyp = hypothesis_study(levels)?;
    report.push(Identity::at_least("hypothesis residual: order in dt", HYPOTHESIS, hyp.min_order, 1.9));
    note_study(report, &hyp);
    let pulled = pullback_study(levels, study_chain)?;
    report.push(Identity::holds("pulled-back kernel finite and Hermitian", CONCLUSIONS, pulled.kernel_pass));
    report.push(Identity::at_least("pulled-back bisolution residual: order in dt", CONCLUSIONS, pulled.bisolution.min_order, 1.5));
    report.push(Identity::at_least("pulled-back commutator residual: order in dt", CONCLUSIONS, pulled.ccr.min_order, 1.5));
    note_study(report, &pulled.bisolution);
    note_study(report, &pulled.ccr);

    let g = study_grid(levels[0])?;
    let op = canonical_operator(&MetricField::minkowski(&g))?;
    let nu = lattice_vacuum(&g, CANONICAL_MASS)?.kernel()?;
    report.push(Identity::at_most("lattice vacuum: sup|nu - nu^T - iG| / sup|nu|", EXACT, ccr_hypothesis_check(&nu, &op)?.relative, 1e-12));
    report.push(Identity::at_most("lattice vacuum: sup|N nu|", EXACT, bisolution_check(&nu, &op)?.sup_norm, 1e-8));

    let smooth = hadamard_verdict(&nu.add(&smooth_perturbation(&g, 0.1)?)?, &nu, &op)?;
    report.push(Identity::holds("smooth perturbation passes the proxy", PROXY, smooth.pass));
    report.note(format!(
        "smooth perturbation: tail ratio {:.3e}, max growth {:.3}",
        smooth.proxy.tail_ratio, smooth.proxy.max_growth
    ));
    let mut rng = ctx.rng(stream::HADAMARD);
    let rough = hadamard_verdict(&nu.add(&white_noise(&g, 1e-3, &mut rng)?)?, &nu, &op)?;
    report.push(Identity::holds("rough perturbation fails the proxy", PROXY, !rough.pass));
    report.note(format!(
        "rough perturbation: tail ratio {:.3e}, max growth {:.3}",
        rough.proxy.tail_ratio, rough.proxy.max_growth
    ));
    report.note(format!(
        "the smoothness proxy stands in for the {PROXY_FOR}, which is not checkable on a finite lattice"
    ));
    Ok(())
}

pub(crate) fn note_study(report: &mut SuiteReport, s: &RefinementStudy) {
    let errors: Vec<String> = s.levels.iter().zip(&s.errors).map(|(n, e)| format!("{n}: {e:.3e}")).collect();
    let orders: Vec<String> = s.orders.iter().map(|o| format!("{o:.3}")).collect();
    report.note(format!("{}: {}; orders {}", s.quantity, errors.join(", "), orders.join(", ")));
}
