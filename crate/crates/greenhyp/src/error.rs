use moellerlab_geometry::GeometryError;
use moellerlab_lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GreenError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("operators use different fiber metrics")]
    FiberMismatch,
    #[error("stencil block not invertible at ({n}, {j})")]
    SingularBlock { n: usize, j: usize },
    #[error("principal part does not match the metric at ({n}, {j})")]
    SymbolMismatch { n: usize, j: usize },
    #[error("scale factor not positive at ({n}, {j})")]
    NonPositiveScale { n: usize, j: usize },
    #[error("time step {dt} exceeds the stability limit {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("source is nonzero on level {level}, outside the admissible window")]
    SourceOutsideWindow { level: usize },
    #[error("slice {level} is not an interior time level")]
    SliceNotInterior { level: usize },
    #[error("operator is not self-adjoint; the symplectic form needs N = N†")]
    NotSelfAdjoint,
    #[error("grid too large for a dense kernel ({dim} unknowns)")]
    TooLarge { dim: usize },
}
