use moellerlab_ccr::CcrError;
use moellerlab_geometry::GeometryError;
use moellerlab_greenhyp::GreenError;
use moellerlab_lattice::LatticeError;
use moellerlab_moller::MollerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HadamardError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error(transparent)]
    Moller(#[from] MollerError),
    #[error(transparent)]
    Ccr(#[from] CcrError),
    #[error("mass must be positive, got {mass}")]
    NonPositiveMass { mass: f64 },
    #[error("metric is not ultrastatic with constant spatial part")]
    NotUltrastatic,
    #[error("mode {mode} violates the leapfrog stability bound (omega dt = {omega_dt})")]
    Unstable { mode: usize, omega_dt: f64 },
    #[error("kernels or operators live on different grids")]
    GridMismatch,
    #[error("only scalar (rank-1) kernels are supported")]
    Rank,
    #[error("grid too large for a dense kernel ({dim} points)")]
    TooLarge { dim: usize },
    #[error("no sample columns")]
    EmptySample,
}
