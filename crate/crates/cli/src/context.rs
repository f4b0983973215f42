use std::cell::OnceCell;
use std::path::PathBuf;

use anyhow::{anyhow, Context as _};
use moellerlab_geometry::{build_chain, ChainSearch, ChainStrategy, LinkDirection, MetricField, ParacausalChain};
use moellerlab_greenhyp::{build_operator, HyperbolicOperator, LowerOrder};
use moellerlab_lattice::{smooth_step, FiberMetric, ScalarField, SpacetimeGrid};
use moellerlab_moller::{compose_chain_with, default_profile, MollerOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ChainDirective, Prepared, Scenario};

/// Chain search outcome; explicit chains are reported as found directly.
#[derive(Debug, Clone)]
pub struct ChainOutcome {
    pub search: ChainSearch,
    pub explicit: bool,
}

/// A prepared scenario with the chain and Møller operator built on first use.
pub struct Context<'a> {
    pub scenario: &'a Scenario,
    pub prepared: Prepared,
    chain: OnceCell<Result<ChainOutcome, String>>,
    moller: OnceCell<Result<MollerOperator, String>>,
}

impl<'a> Context<'a> {
    pub fn new(scenario: &'a Scenario, prepared: Prepared) -> Self {
        Self { scenario, prepared, chain: OnceCell::new(), moller: OnceCell::new() }
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.prepared.grid
    }

    pub fn metric(&self, name: &str) -> anyhow::Result<&MetricField> {
        self.prepared.metrics.get(name).ok_or_else(|| anyhow!("unknown metric {name:?}"))
    }

    /// Independent stream per consumer, so results do not depend on which
    /// suites run.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.scenario.seed);
        r.set_stream(stream);
        r
    }

    /// Klein-Gordon operator of the scenario on `metric`.
    pub fn operator(&self, metric: &MetricField) -> anyhow::Result<HyperbolicOperator> {
        let g = metric.grid();
        let op = build_operator(metric, &LowerOrder::klein_gordon(g, self.scenario.operator.mass), &FiberMetric::identity(g))?;
        Ok(if self.scenario.operator.symmetrize { op.symmetrize() } else { op })
    }

    pub fn profile(&self) -> anyhow::Result<ScalarField> {
        match self.scenario.chi {
            Some(w) => Ok(smooth_step(&self.grid().with_rank(1)?, w.t0, w.t1)?),
            None => Ok(default_profile(self.grid())?),
        }
    }

    pub fn chain_outcome(&self) -> anyhow::Result<&ChainOutcome> {
        self.chain
            .get_or_init(|| self.search().map_err(|e| format!("{e:#}")))
            .as_ref()
            .map_err(|e| anyhow!("{e}"))
    }

    fn search(&self) -> anyhow::Result<ChainOutcome> {
        match &self.scenario.chain {
            ChainDirective::Auto { from, to } => {
                let search = build_chain(self.metric(from)?, self.metric(to)?)?;
                Ok(ChainOutcome { search, explicit: false })
            }
            ChainDirective::Explicit { metrics, links } => {
                let ms = metrics.iter().map(|n| self.metric(n).cloned()).collect::<anyhow::Result<Vec<_>>>()?;
                let ls: Vec<LinkDirection> = links.iter().map(|&l| l.into()).collect();
                let chain = ParacausalChain::new(ms, ls).context("explicit chain")?;
                Ok(ChainOutcome { search: ChainSearch::Found { chain, strategy: ChainStrategy::Direct }, explicit: true })
            }
        }
    }

    pub fn chain(&self) -> anyhow::Result<&ParacausalChain> {
        match &self.chain_outcome()?.search {
            ChainSearch::Found { chain, .. } => Ok(chain),
            ChainSearch::OrientationReversed(_) => Err(anyhow!("no paracausal chain: time orientations are reversed")),
            ChainSearch::NotFound => Err(anyhow!("no paracausal chain found")),
        }
    }

    pub fn moller(&self) -> anyhow::Result<&MollerOperator> {
        self.moller
            .get_or_init(|| self.compose().map_err(|e| format!("{e:#}")))
            .as_ref()
            .map_err(|e| anyhow!("{e}"))
    }

    fn compose(&self) -> anyhow::Result<MollerOperator> {
        let chain = self.chain()?;
        let ops = chain.metrics().iter().map(|m| self.operator(m)).collect::<anyhow::Result<Vec<_>>>()?;
        compose_chain_with(chain, &ops, &self.profile()?).context("no Møller operator along the chain")
    }

    /// Directory for CSV artifacts, if the scenario has an output.
    pub fn artifact_dir(&self) -> Option<PathBuf> {
        self.scenario.output.as_ref().map(|o| o.join(&self.scenario.name))
    }
}
