//! Time-oriented Lorentzian metrics on a `1+1` lattice cylinder.
//!
//! Cones are handled as arcs of directions `v(θ) = (sin θ, cos θ)`, so
//! inclusion and intersection tests are interval comparisons rather than
//! samples.

mod alpha;
mod blend;
mod causal;
mod chain;
mod error;
mod metric;
mod order;
mod preset;
mod tensor;
mod witness;

pub use alpha::{alpha_rescale, alpha_strip_values, tune_alpha};
pub use blend::{convex_combination, sharp_interpolation, squeeze_metric, squeeze_tensor};
pub use causal::{causal_future, closed_causal_exists, PointSet};
pub use chain::{
    build_chain, rotation_intermediate, ChainSearch, ChainStrategy, LinkDirection, ParacausalChain,
    ReversalCertificate,
};
pub use error::GeometryError;
pub use metric::{
    classify_vector, cone_data, inverse_metric, musical_flat, musical_sharp, CausalClass, ConeData, FutureSide,
    MetricField, SplitForm, VectorField, MIN_ABS_DET,
};
pub use order::{cone_inclusion, cone_inclusion_at, preceq, Precedence};
pub use preset::{bump, metric_preset};
pub use tensor::{wrap_angle, Arc, Covector, SymTensor2, TangentVector, ANGLE_EPS};
pub use witness::{cones_intersect_future, paracausal_witness, ConeGap};
