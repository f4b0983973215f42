//! CCR algebras over finite dictionaries of test sections: normal-ordered
//! products, reduction modulo the field equation, the *-isomorphism induced
//! by a Møller operator, and quasifree states with their pull-backs.

mod algebra;
mod dictionary;
mod error;
mod iso;
mod kernel;
mod onshell;
mod sample;
mod state;

pub use algebra::{AlgebraElement, CcrAlgebra, Term};
pub use dictionary::{FieldDictionary, PairingTable, ANTISYMMETRY_TOLERANCE};
pub use error::CcrError;
pub use iso::{image_dictionary, star_isomorphism, StarIsomorphism, COMMUTATOR_TOLERANCE};
pub use kernel::TwoPointKernel;
pub use onshell::{on_shell_reduce, OnShellSplit};
pub use sample::{dominated_table, random_element};
pub use state::{pullback_state, quasifree_npoint, state_eval, QuasifreeState, STATE_TOLERANCE};
