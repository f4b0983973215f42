use moellerlab_geometry::GeometryError;
use moellerlab_greenhyp::GreenError;
use moellerlab_lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MollerError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error("operators live on different grids")]
    GridMismatch,
    #[error("operator {index} is not self-adjoint")]
    NotSelfAdjoint { index: usize },
    #[error("chain has {metrics} metrics but {operators} operators were supplied")]
    OperatorCount { metrics: usize, operators: usize },
    #[error("operator {index} is built on a different metric than chain member {index}")]
    OperatorMetric { index: usize },
    #[error("interpolation profile leaves [0, 1] on level {level}")]
    ProfileWindow { level: usize },
    #[error("scale profile breaks admissibility on level {level}")]
    ScaleProfile { level: usize },
    #[error("blended operator differs from an endpoint operator outside the transition on level {level}")]
    IdentityRegion { level: usize },
    #[error("cannot compose: target of the first map is not the source of the second")]
    CompositionMismatch,
    #[error("input is not a solution (relative residual {residual:e})")]
    NotASolution { residual: f64 },
    #[error("grid too large for dense matrices ({dim} unknowns)")]
    TooLarge { dim: usize },
}
