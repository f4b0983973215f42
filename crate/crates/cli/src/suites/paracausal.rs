use moellerlab_geometry::{closed_causal_exists, rotation_intermediate, ChainSearch, LinkDirection, MetricField, ParacausalChain};

use crate::config::ChainExpectation;
use crate::context::Context;
use crate::report::{Identity, SuiteReport};

const FOUND: &str = "the pair is joined by a finite chain of comparable metrics";
const ALIGNED: &str = "consecutive chain metrics have nested cones with aligned futures";
const REVERSED: &str = "metrics with reversed time orientation on the cylinder are not paracausally related";
const CLOSED: &str = "rotating the cones through the spatial axis creates a closed causal curve";

pub fn run(ctx: &Context, report: &mut SuiteReport) -> anyhow::Result<()> {
    let outcome = ctx.chain_outcome()?;
    let expect = ctx.scenario.expect.paracausal;
    match &outcome.search {
        ChainSearch::Found { chain, strategy } => {
            report.push(Identity::holds("chain found as expected", FOUND, expect == ChainExpectation::Chain));
            let again = ParacausalChain::new(chain.metrics().to_vec(), chain.links().to_vec());
            report.push(Identity::holds("every link revalidates", ALIGNED, again.is_ok()));
            let back = chain.reversed();
            let back_again = ParacausalChain::new(back.metrics().to_vec(), back.links().to_vec());
            report.push(Identity::holds("reversed chain revalidates", ALIGNED, back_again.is_ok()));
            report.push(Identity::at_most(
                "metrics in chain",
                "a short chain suffices",
                chain.len() as f64,
                ctx.scenario.expect.max_metrics as f64,
            ));
            if outcome.explicit {
                report.note("explicit chain from the scenario");
            } else {
                report.note(format!("strategy: {strategy:?}"));
            }
            for line in summary(chain) {
                report.note(line);
            }
        }
        ChainSearch::OrientationReversed(cert) => {
            report.push(Identity::holds(
                "orientation reversal expected",
                REVERSED,
                expect == ChainExpectation::OrientationReversed,
            ));
            let source = ctx.metric(ctx.scenario.chain.source())?;
            let points = source.grid().points();
            report.push(Identity::at_most(
                "points without reversed orientation",
                REVERSED,
                points.saturating_sub(cert.points) as f64,
                0.0,
            ));
            report.push(Identity::holds("certificate: rotation has closed causal curve", CLOSED, cert.rotation_has_closed_causal_curve));
            report.push(Identity::holds(
                "closed causal curve of the rotation intermediate",
                CLOSED,
                closed_causal_exists(&rotation_intermediate(source)),
            ));
            report.note(format!("no chain: orientation reversed at all {} points", cert.points));
        }
        ChainSearch::NotFound => {
            report.push(Identity::holds("no chain, as expected", FOUND, expect == ChainExpectation::None));
            report.note("no chain found");
        }
    }
    Ok(())
}

fn describe(m: &MetricField, n: usize, j: usize) -> String {
    let g = m.at(n, j);
    let v = m.future_at(n, j);
    format!("g = ({:+.4}, {:+.4}, {:+.4}), future = ({:+.4}, {:+.4})", g.tt, g.tx, g.xx, v.t, v.x)
}

/// One line per metric at the central lattice point, then the links.
pub fn summary(chain: &ParacausalChain) -> Vec<String> {
    let grid = chain.source().grid();
    let (n, j) = (grid.nt / 2, grid.nx / 2);
    let mut out: Vec<String> =
        chain.metrics().iter().enumerate().map(|(k, m)| format!("g{k} at ({n},{j}): {}", describe(m, n, j))).collect();
    let links: Vec<String> = chain
        .links()
        .iter()
        .enumerate()
        .map(|(k, d)| match d {
            LinkDirection::Forward => format!("g{k} <= g{}", k + 1),
            LinkDirection::Backward => format!("g{} <= g{k}", k + 1),
        })
        .collect();
    out.push(format!("links: {}", links.join(", ")));
    out
}
