//! Møller operators between lattice operators on paracausally related
//! metrics: the factors `R₊`, `R₋` and their inverses, composition along a
//! chain, weighted adjoints and the identities they satisfy.

mod adjoint;
mod error;
mod operator;
mod step;
mod verify;

pub use adjoint::{adjoint_action_checks, adjoint_calculus, AdjointOperator};
pub use error::MollerError;
pub use operator::{
    canonical_operator, compose_canonical, compose_chain, compose_chain_with, default_profile, LinkRealization, MollerOperator,
    CANONICAL_MASS,
};
pub use step::{LevelRange, MollerLink, MollerStep, StepKind};
pub use verify::{
    adjoint_intertwining, difference_supports, identity_regions, intertwine, intertwine_link, propagator_intertwining,
    restrict_to_solutions, round_trip, symplectic_preservation, telescoping, verify_moller, Dictionary, MollerReport,
    SolutionImage, VerifyOptions, DENSE_VERIFY_POINTS, SOLUTION_TOLERANCE,
};
