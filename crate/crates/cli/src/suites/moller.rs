use moellerlab_moller::{adjoint_action_checks, adjoint_calculus, verify_moller, VerifyOptions, DENSE_VERIFY_POINTS};

use crate::context::Context;
use crate::report::{Identity, SuiteReport};

const ADJOINT: &str = "adjoints weighted by both volume forms obey the usual adjoint calculus";

/// Plain statement of what each Møller check tests, keyed on its name.
fn claim(identity: &str) -> &'static str {
    if identity.contains("sigma") {
        "R maps solutions of N to solutions of N' preserving the symplectic form"
    } else if identity.contains("dagger N'") {
        "the adjoint of R intertwines N' and N"
    } else if identity.contains("N' R = N") {
        "R intertwines N with the volume-rescaled N'"
    } else if identity.contains("Id") {
        "R is invertible"
    } else if identity.contains("R+ f = f") {
        "each factor is the identity where its two operators coincide"
    } else {
        "R carries the causal propagator of N to that of N'"
    }
}

pub fn run(ctx: &Context, report: &mut SuiteReport) -> anyhow::Result<()> {
    let r = ctx.moller()?;
    let dense = ctx.scenario.dense_kernels.then_some(true);
    let options = VerifyOptions {
        dictionary: ctx.scenario.dictionary.count,
        seed: ctx.scenario.dictionary_seed(),
        dense,
        ..VerifyOptions::default()
    };
    for c in verify_moller(r, &options)?.checks {
        let claim = claim(&c.identity);
        report.push(Identity::from_check(c, claim));
    }
    if r.len() <= DENSE_VERIFY_POINTS {
        for (k, link) in r.parts().iter().enumerate() {
            for mut c in adjoint_calculus(link, 1e-10)? {
                c.identity = format!("link {k}: {}", c.identity);
                report.push(Identity::from_check(c, ADJOINT));
            }
        }
        for c in adjoint_action_checks(r, 1e-10)? {
            report.push(Identity::from_check(c, ADJOINT));
        }
    } else {
        report.note(format!("dense adjoint calculus skipped above {DENSE_VERIFY_POINTS} points"));
    }
    let links: Vec<String> = r.links().iter().map(|l| format!("{l:?}")).collect();
    report.note(format!("links: {}", links.join(", ")));
    report.note(format!(
        "propagator identity checked {}",
        if options.dense.unwrap_or(r.grid().points() <= DENSE_VERIFY_POINTS) { "on dense kernels" } else { "on dictionary actions" }
    ));
    Ok(())
}
