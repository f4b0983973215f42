use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("grid too small: nt = {nt}, nx = {nx} (both must be at least 4)")]
    GridTooSmall { nt: usize, nx: usize },
    #[error("non-positive extent: {0}")]
    NonPositiveExtent(&'static str),
    #[error("fiber rank must be at least 1")]
    ZeroRank,
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("grids differ")]
    GridMismatch,
    #[error("volume weight must be positive, found {value} at (n={n}, j={j})")]
    NonPositiveVolume { n: usize, j: usize, value: f64 },
    #[error("value {value} at (n={n}, j={j}) violates range {range}")]
    RangeViolation { n: usize, j: usize, value: f64, range: &'static str },
    #[error("fiber metric not symmetric positive definite at (n={n}, j={j})")]
    NotPositiveDefinite { n: usize, j: usize },
    #[error("step window must satisfy t_min < t0 < t1 < t_max (t0 = {t0}, t1 = {t1})")]
    InvalidStepWindow { t0: f64, t1: f64 },
    #[error("support window [{first}, {last}] is not strictly inside the time extent")]
    WindowNotInterior { first: usize, last: usize },
    #[error("section is nonzero at level {level}, outside the declared window")]
    SupportOutsideWindow { level: usize },
    #[error("malformed data: {0}")]
    Malformed(String),
}
