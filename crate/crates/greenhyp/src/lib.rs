//! Lattice normally hyperbolic operators on `[t_min, t_max] × S¹` and their
//! retarded, advanced and causal Green operators.

pub mod block;
mod cauchy;
mod error;
mod exact;
mod green;
mod operator;
mod report;
mod symplectic;

pub use cauchy::CauchyData;
pub use error::GreenError;
pub use exact::{exactness_check, green_adjoint_relation, propagator_symplectic_identity, reconstruction_source};
pub use green::{green_scaled, CausalPropagator, GreenSystem, DENSE_LIMIT};
pub use operator::{
    build_operator, build_operator_with_spatial, convex_operator, symmetrized_blend, HyperbolicOperator, LowerOrder,
    Neighbor, NEIGHBORS,
};
pub use report::CheckReport;
pub use symplectic::{symplectic_form, weighted_pairing};
