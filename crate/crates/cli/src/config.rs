use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use moellerlab_geometry::{metric_preset, GeometryError, LinkDirection, MetricField};
use moellerlab_hadamard::STUDY_LEVELS;
use moellerlab_lattice::{make_grid, LatticeError, SpacetimeGrid};
use serde::{Deserialize, Serialize};

/// Self-test scenario shipped with the binary.
pub const SELFTEST: &str = include_str!("../configs/minkowski-selftest.json");

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("grid: {0}")]
    Grid(#[from] LatticeError),
    #[error("metric {name:?}: {source}")]
    Metric { name: String, source: GeometryError },
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
    #[error("{field}: {reason}")]
    Invalid { field: &'static str, reason: String },
}

/// Suites in dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cones,
    Paracausal,
    Green,
    Moller,
    Ccr,
    Hadamard,
    Convergence,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Cones => "cones",
            Suite::Paracausal => "paracausal",
            Suite::Green => "green",
            Suite::Moller => "moller",
            Suite::Ccr => "ccr",
            Suite::Hadamard => "hadamard",
            Suite::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nt: usize,
    pub nx: usize,
    #[serde(default)]
    pub t_min: f64,
    /// Defaults to `t_min + (nt−1)·dx/2`.
    #[serde(default)]
    pub t_max: Option<f64>,
    /// Circumference, 2π by default.
    #[serde(default)]
    pub length: Option<f64>,
}

impl GridSpec {
    pub fn build(&self) -> Result<SpacetimeGrid, LatticeError> {
        let length = self.length.unwrap_or(2.0 * PI);
        let dx = length / self.nx.max(1) as f64;
        let t_max = self.t_max.unwrap_or(self.t_min + 0.5 * dx * self.nt.saturating_sub(1) as f64);
        make_grid(self.nt, self.nx, self.t_min, t_max, length, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OperatorSpec {
    pub mass: f64,
    pub symmetrize: bool,
}

impl Default for OperatorSpec {
    fn default() -> Self {
        Self { mass: 1.0, symmetrize: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    Forward,
    Backward,
}

impl From<Link> for LinkDirection {
    fn from(l: Link) -> Self {
        match l {
            Link::Forward => LinkDirection::Forward,
            Link::Backward => LinkDirection::Backward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ChainDirective {
    /// Search for a chain between two named metrics.
    Auto { from: String, to: String },
    /// Named metrics with the inclusion direction of every link.
    Explicit { metrics: Vec<String>, links: Vec<Link> },
}

impl ChainDirective {
    pub fn names(&self) -> Vec<&str> {
        match self {
            ChainDirective::Auto { from, to } => vec![from, to],
            ChainDirective::Explicit { metrics, .. } => metrics.iter().map(String::as_str).collect(),
        }
    }

    pub fn source(&self) -> &str {
        self.names()[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChiWindow {
    pub t0: f64,
    pub t1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DictionarySpec {
    pub count: usize,
    /// Defaults to the scenario seed.
    pub seed: Option<u64>,
    /// Support levels, `3..=nt−4` by default.
    pub first: Option<usize>,
    pub last: Option<usize>,
}

impl Default for DictionarySpec {
    fn default() -> Self {
        Self { count: 16, seed: None, first: None, last: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainExpectation {
    Chain,
    OrientationReversed,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Expectations {
    pub paracausal: ChainExpectation,
    pub max_metrics: usize,
}

impl Default for Expectations {
    fn default() -> Self {
        Self { paracausal: ChainExpectation::Chain, max_metrics: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConesSpec {
    pub pairs: usize,
    pub nt: usize,
    pub nx: usize,
}

impl Default for ConesSpec {
    fn default() -> Self {
        Self { pairs: 1000, nt: 4, nx: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GreenSpec {
    pub inputs: usize,
    pub sources: usize,
    pub exactness: usize,
    pub solutions: usize,
    pub pairs: usize,
}

impl Default for GreenSpec {
    fn default() -> Self {
        Self { inputs: 100, sources: 20, exactness: 5, solutions: 10, pairs: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CcrSpec {
    pub triples: usize,
    pub generators: usize,
    pub npoint: usize,
    pub elements: usize,
}

impl Default for CcrSpec {
    fn default() -> Self {
        Self { triples: 200, generators: 16, npoint: 50, elements: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HadamardSpec {
    /// Time levels of the refinement study.
    pub levels: Vec<usize>,
}

impl Default for HadamardSpec {
    fn default() -> Self {
        Self { levels: STUDY_LEVELS.to_vec() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Study {
    /// Cauchy problem for the wave equation against d'Alembert's formula.
    Dalembert,
    /// Hadamard hypothesis and pulled-back conclusion residuals.
    Hadamard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceSpec {
    pub studies: Vec<Study>,
    /// Spatial sites of the wave-equation study.
    pub grids: Vec<usize>,
}

impl Default for ConvergenceSpec {
    fn default() -> Self {
        Self { studies: vec![Study::Dalembert], grids: vec![32, 64, 128] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub grid: GridSpec,
    /// Name to metric preset.
    pub metrics: BTreeMap<String, String>,
    #[serde(default)]
    pub operator: OperatorSpec,
    pub chain: ChainDirective,
    /// Cutoff transition window; the middle third of the run by default.
    #[serde(default)]
    pub chi: Option<ChiWindow>,
    #[serde(default)]
    pub dictionary: DictionarySpec,
    pub suites: Vec<Suite>,
    #[serde(default)]
    pub expect: Expectations,
    #[serde(default)]
    pub cones: ConesSpec,
    #[serde(default)]
    pub green: GreenSpec,
    #[serde(default)]
    pub ccr: CcrSpec,
    #[serde(default)]
    pub hadamard: HadamardSpec,
    #[serde(default)]
    pub convergence: ConvergenceSpec,
    /// Write dense `G⁺`, `G⁻`, `G` as CSV and verify with dense kernels.
    #[serde(default)]
    pub dense_kernels: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// Command-line replacements for scenario fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub grid: Option<(usize, usize)>,
    pub mass: Option<f64>,
    /// Replaces the last metric of the chain.
    pub preset: Option<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub dense_kernels: bool,
}

/// Grid and metrics built from a checked scenario.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub grid: SpacetimeGrid,
    pub metrics: BTreeMap<String, MetricField>,
}

impl Scenario {
    pub fn parse(text: &str, path: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_owned(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let label = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: label.clone(), source })?;
        Self::parse(&text, &label)
    }

    pub fn selftest() -> Self {
        Self::parse(SELFTEST, "minkowski-selftest.json").expect("bundled config parses")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some((nt, nx)) = o.grid {
            self.grid.nt = nt;
            self.grid.nx = nx;
            self.grid.t_max = None;
        }
        if let Some(m) = o.mass {
            self.operator.mass = m;
        }
        if let Some(p) = &o.preset {
            let last = self.chain.names().last().map(|s| s.to_string()).unwrap_or_default();
            self.metrics.insert(last, p.clone());
        }
        if let Some(out) = &o.out {
            self.output = Some(out.clone());
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        self.dense_kernels |= o.dense_kernels;
    }

    pub fn dictionary_seed(&self) -> u64 {
        self.dictionary.seed.unwrap_or(self.seed)
    }

    /// Resolves every reference and builds the grid and metrics.
    pub fn prepare(&self) -> Result<Prepared, ConfigError> {
        let invalid = |field, reason: &str| ConfigError::Invalid { field, reason: reason.to_owned() };
        if self.suites.is_empty() {
            return Err(invalid("suites", "no suite requested"));
        }
        let grid = self.grid.build()?;
        if grid.nt < 8 {
            return Err(invalid("grid", "need at least 8 time levels"));
        }
        if !(self.operator.mass.is_finite() && self.operator.mass >= 0.0) {
            return Err(invalid("operator.mass", "must be finite and non-negative"));
        }
        let mut metrics = BTreeMap::new();
        for (name, spec) in &self.metrics {
            let m = metric_preset(spec, &grid).map_err(|source| ConfigError::Metric { name: name.clone(), source })?;
            metrics.insert(name.clone(), m);
        }
        for name in self.chain.names() {
            if !metrics.contains_key(name) {
                return Err(ConfigError::UnknownMetric(name.to_owned()));
            }
        }
        if let ChainDirective::Explicit { metrics: names, links } = &self.chain {
            if names.len() < 2 || links.len() + 1 != names.len() {
                return Err(invalid("chain.explicit", "need one link between each consecutive pair of metrics"));
            }
        }
        if let Some(w) = self.chi {
            if !(grid.t_min < w.t0 && w.t0 < w.t1 && w.t1 < grid.t_max) {
                return Err(invalid("chi", "window must satisfy t_min < t0 < t1 < t_max"));
            }
        }
        let (first, last) = self.dictionary_levels(&grid);
        if self.dictionary.count == 0 || first > last || last >= grid.nt {
            return Err(invalid("dictionary", "empty dictionary or support outside the grid"));
        }
        if self.hadamard.levels.len() < 2 || self.convergence.grids.len() < 2 {
            return Err(invalid("levels", "a refinement study needs at least two grids"));
        }
        Ok(Prepared { grid, metrics })
    }

    pub fn dictionary_levels(&self, grid: &SpacetimeGrid) -> (usize, usize) {
        (self.dictionary.first.unwrap_or(3), self.dictionary.last.unwrap_or(grid.nt.saturating_sub(4)))
    }
}
