//! Vacuum two-point kernels on the lattice, the hypotheses and conclusions
//! of Hadamard propagation as kernel checks, and a smoothness proxy for the
//! wavefront-set condition.

mod checks;
mod error;
mod fixture;
mod kernel;
mod sample;
mod smooth;
mod study;
mod vacuum;

pub use checks::{
    bisolution_check, bisolution_check_at, ccr_hypothesis_check, ccr_hypothesis_check_at, hadamard_verdict, kernel_check,
    pullback_kernel, BisolutionReport, HadamardVerdict, HypothesisReport, KernelReport, SlotReport, HERMITICITY_TOLERANCE,
};
pub use error::HadamardError;
pub use fixture::{smooth_perturbation, white_noise};
pub use kernel::{KernelTerm, VacuumKernel, DENSE_KERNEL_LIMIT};
pub use sample::{default_columns, SampledKernel};
pub use smooth::{smoothness_proxy, DerivativeGrowth, LagRatio, SmoothnessReport, GROWTH_THRESHOLD, MAX_ORDER, NOISE_FLOOR, PROXY_FOR, TAIL_THRESHOLD};
pub use study::*;
pub use vacuum::{lattice_vacuum, reference_vacuum, ultrastatic_vacuum, Dispersion, Mode, UltrastaticVacuum};
