use moellerlab_greenhyp::GreenError;
use moellerlab_lattice::LatticeError;
use moellerlab_moller::MollerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CcrError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error(transparent)]
    Moller(#[from] MollerError),
    #[error("pairing table is not antisymmetric (defect {defect:e})")]
    NotAntisymmetric { defect: f64 },
    #[error("table has shape {rows}x{cols}, expected {expected}x{expected}")]
    Shape { rows: usize, cols: usize, expected: usize },
    #[error("generator index {index} out of range for {len} generators")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("sections live on a different grid than the operator")]
    GridMismatch,
    #[error("dictionary member {index} is not in the span of the retained members modulo N (residual {residual:e})")]
    NotClosed { index: usize, residual: f64 },
    #[error("retained member {index} is dependent on the others modulo N")]
    DependentBasis { index: usize },
    #[error("commutator tables differ by {residual:e}")]
    CommutatorMismatch { residual: f64 },
    #[error("two-point table violates W - W^T = iG by {residual:e}")]
    NotCcrCompatible { residual: f64 },
    #[error("two-point table is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("two-point table is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },
    #[error("dictionary is built on a different operator than the Møller target")]
    OperatorMismatch,
    #[error("dictionaries have {left} and {right} members")]
    DictionaryMismatch { left: usize, right: usize },
    #[error("section {index} reaches outside the levels covered by the kernel")]
    OutsideKernel { index: usize },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}
