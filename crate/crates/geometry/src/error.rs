use moellerlab_lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("shape mismatch: expected {expected} points, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("metrics live on different grids")]
    GridMismatch,
    #[error("degenerate metric at (n={n}, j={j}): det = {det:e}")]
    Degenerate { n: usize, j: usize, det: f64 },
    #[error("metric not Lorentzian at (n={n}, j={j}): det = {det:e}")]
    NotLorentzian { n: usize, j: usize, det: f64 },
    #[error("time orientation not timelike at (n={n}, j={j})")]
    OrientationNotTimelike { n: usize, j: usize },
    #[error("metrics are not comparable with aligned time orientation")]
    NotComparable,
    #[error("cutoff outside [0,1] at (n={n}, j={j})")]
    CutoffOutOfRange { n: usize, j: usize },
    #[error("squeeze factor {a} outside (0,1] at (n={n}, j={j})")]
    SqueezeOutOfRange { n: usize, j: usize, a: f64 },
    #[error("metric not in orthogonal splitting form at (n={n}, j={j})")]
    NotSplitting { n: usize, j: usize },
    #[error("time slice not spacelike at (n={n}, j={j})")]
    SlicesNotSpacelike { n: usize, j: usize },
    #[error("future of the second metric points to decreasing t at (n={n}, j={j})")]
    TimeOrientationMismatch { n: usize, j: usize },
    #[error("profile varies along the slice at level {n}")]
    NotTimeDependentOnly { n: usize },
    #[error("chain needs k+1 metrics for k links, got {metrics} metrics and {links} links")]
    ChainShape { metrics: usize, links: usize },
    #[error("chain link {link} does not satisfy its flagged inclusion")]
    BrokenLink { link: usize },
    #[error("unknown metric preset `{0}`")]
    UnknownPreset(String),
    #[error("i/o: {0}")]
    Io(String),
}
