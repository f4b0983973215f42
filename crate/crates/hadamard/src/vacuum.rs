use std::f64::consts::PI;

use moellerlab_geometry::MetricField;
use moellerlab_lattice::SpacetimeGrid;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::kernel::{KernelTerm, VacuumKernel};
use crate::HadamardError;

/// Time dependence of the vacuum modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dispersion {
    /// `e^{iω_k t}` with `ω_k² = m² + h⁻¹ (2/dx · sin(k dx/2))²`; the
    /// spatial structure matches the lattice operator, time is continuous.
    Continuum,
    /// `e^{iΩ_k t}` with `cos(Ω_k dt) = 1 − ω_k² dt²/2`, normalized by
    /// `sin(Ω_k dt)/dt`: an exact bisolution of the leapfrog operator whose
    /// antisymmetric part is exactly its causal propagator.
    Leapfrog,
}

/// One spatial Fourier mode of the vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mode {
    pub wavenumber: f64,
    /// `ω_k` of the spatially discretized operator.
    pub omega: f64,
    /// Frequency used in the time dependence.
    pub frequency: f64,
    /// `ν = Σ e^{i(frequency·Δt + kΔx)} / normalization`.
    pub normalization: f64,
}

/// Mode sum of the ground state of `m² + ∂_t² − h⁻¹∂_x²` on the lattice of
/// `−dt² + h dx²`, with `h` constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UltrastaticVacuum {
    grid: SpacetimeGrid,
    mass: f64,
    spatial: f64,
    dispersion: Dispersion,
    modes: Vec<Mode>,
}

/// Vacuum of the flat lattice Klein-Gordon operator with continuous time.
pub fn ultrastatic_vacuum(grid: &SpacetimeGrid, mass: f64) -> Result<UltrastaticVacuum, HadamardError> {
    UltrastaticVacuum::new(grid, 1.0, mass, Dispersion::Continuum)
}

/// Vacuum of the flat leapfrog operator itself.
pub fn lattice_vacuum(grid: &SpacetimeGrid, mass: f64) -> Result<UltrastaticVacuum, HadamardError> {
    UltrastaticVacuum::new(grid, 1.0, mass, Dispersion::Leapfrog)
}

/// Vacuum of a metric `−dt² + h dx²` with constant `h`.
pub fn reference_vacuum(metric: &MetricField, mass: f64, dispersion: Dispersion) -> Result<UltrastaticVacuum, HadamardError> {
    let c = metric.components();
    let h = c[0].xx;
    let ultrastatic = c.iter().all(|g| g.tt == -1.0 && g.tx == 0.0 && g.xx == h) && metric.orientation().iter().all(|v| v.t > 0.0);
    if !ultrastatic {
        return Err(HadamardError::NotUltrastatic);
    }
    UltrastaticVacuum::new(metric.grid(), h, mass, dispersion)
}

impl UltrastaticVacuum {
    pub fn new(grid: &SpacetimeGrid, spatial: f64, mass: f64, dispersion: Dispersion) -> Result<Self, HadamardError> {
        if mass.is_nan() || mass <= 0.0 {
            return Err(HadamardError::NonPositiveMass { mass });
        }
        if grid.rank != 1 {
            return Err(HadamardError::Rank);
        }
        let (nx, dx, dt) = (grid.nx as isize, grid.dx, grid.dt);
        let length = grid.length * spatial.sqrt();
        let mut modes = Vec::with_capacity(grid.nx);
        for (mode, n) in (-(nx - 1) / 2..=nx / 2).enumerate() {
            let k = 2.0 * PI * n as f64 / grid.length;
            let lap = (2.0 / dx * (0.5 * k * dx).sin()).powi(2) / spatial;
            let omega = (mass * mass + lap).sqrt();
            let (frequency, rate) = match dispersion {
                Dispersion::Continuum => (omega, omega),
                Dispersion::Leapfrog => {
                    let c = 1.0 - 0.5 * omega * omega * dt * dt;
                    if c <= -1.0 {
                        return Err(HadamardError::Unstable { mode, omega_dt: omega * dt });
                    }
                    let big = c.acos() / dt;
                    (big, (big * dt).sin() / dt)
                }
            };
            modes.push(Mode { wavenumber: k, omega, frequency, normalization: 2.0 * rate * length });
        }
        Ok(Self { grid: *grid, mass, spatial, dispersion, modes })
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dispersion(&self) -> Dispersion {
        self.dispersion
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// `ν((t, x), (t', x'))` from the mode sum.
    pub fn evaluate(&self, dt: f64, dx: f64) -> Complex64 {
        self.modes.iter().map(|m| Complex64::from_polar(1.0 / m.normalization, m.frequency * dt + m.wavenumber * dx)).sum()
    }

    /// `ν` between grid points `p = (n, j)` and `q = (n', j')`.
    pub fn value(&self, p: usize, q: usize) -> Complex64 {
        let g = &self.grid;
        let (n, j, m, k) = (p / g.nx, p % g.nx, q / g.nx, q % g.nx);
        self.evaluate(g.t(n) - g.t(m), g.x(j) - g.x(k))
    }

    /// `ν(p, p) = Σ_k 1/(2ω_k L)`.
    pub fn coincidence(&self) -> f64 {
        self.modes.iter().map(|m| 1.0 / m.normalization).sum()
    }

    /// `∂_t (ν − ν̄)` at equal times and spatial offset `j·dx`, from the
    /// mode sum.
    pub fn antisymmetric_rate(&self, j: isize) -> Complex64 {
        let dx = j as f64 * self.grid.dx;
        self.modes.iter().map(|m| Complex64::new(0.0, 2.0 * m.frequency / m.normalization) * Complex64::from_polar(1.0, m.wavenumber * dx)).sum()
    }

    /// Factored kernel over the grid points.
    pub fn kernel(&self) -> Result<VacuumKernel, HadamardError> {
        let g = &self.grid;
        let phi = DMatrix::from_fn(g.points(), self.modes.len(), |p, k| {
            let m = &self.modes[k];
            Complex64::from_polar(1.0, m.frequency * g.t(p / g.nx) + m.wavenumber * g.x(p % g.nx))
        });
        let weights = self.modes.iter().map(|m| Complex64::new(1.0 / m.normalization, 0.0)).collect();
        VacuumKernel::new(g, vec![KernelTerm::Factored { left: phi.clone(), weights, right: phi }])
    }
}
