use moellerlab_lattice::SpacetimeGrid;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::kernel::{KernelTerm, VacuumKernel};
use crate::HadamardError;

fn profile(g: &SpacetimeGrid, f: impl Fn(f64, f64) -> f64) -> DMatrix<Complex64> {
    DMatrix::from_iterator(g.points(), 1, (0..g.points()).map(|p| Complex64::new(f(g.t(p / g.nx), g.x(p % g.nx)), 0.0)))
}

/// `i ε (a(p) b(q) − b(p) a(q))` with `a = e^{cos x − (t−1)²}` and
/// `b = e^{sin x}(1 + t/2)`: Hermitian, smooth, with a nonzero
/// antisymmetric part.
pub fn smooth_perturbation(grid: &SpacetimeGrid, eps: f64) -> Result<VacuumKernel, HadamardError> {
    let a = profile(grid, |t, x| (x.cos() - (t - 1.0).powi(2)).exp());
    let b = profile(grid, |t, x| x.sin().exp() * (1.0 + 0.5 * t));
    VacuumKernel::new(
        grid,
        vec![
            KernelTerm::Factored { left: a.clone(), weights: vec![Complex64::new(0.0, eps)], right: b.clone() },
            KernelTerm::Factored { left: b, weights: vec![Complex64::new(0.0, -eps)], right: a },
        ],
    )
}

/// `amplitude · ξ(p) η(q)` with independent uniform noise in `[−1, 1]`.
pub fn white_noise(grid: &SpacetimeGrid, amplitude: f64, rng: &mut impl Rng) -> Result<VacuumKernel, HadamardError> {
    let mut draw = || DMatrix::from_iterator(grid.points(), 1, (0..grid.points()).map(|_| Complex64::new(rng.random_range(-1.0..=1.0), 0.0)));
    let (left, right) = (draw(), draw());
    VacuumKernel::new(grid, vec![KernelTerm::Factored { left, weights: vec![Complex64::new(amplitude, 0.0)], right }])
}
