use crate::{LatticeError, Range, ScalarField, SpacetimeGrid};

fn bump_tail(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// Smooth monotone transition from 0 (at `s ≤ 0`) to 1 (at `s ≥ 1`),
/// symmetric about `s = 1/2`.
pub fn step_profile(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let a = bump_tail(s);
    let b = bump_tail(1.0 - s);
    a / (a + b)
}

/// Time cutoff `χ(t)`: 0 before `t0`, 1 after `t1`, constant in space.
pub fn smooth_step(grid: &SpacetimeGrid, t0: f64, t1: f64) -> Result<ScalarField, LatticeError> {
    let ok = t0.is_finite() && t1.is_finite() && grid.t_min < t0 && t0 < t1 && t1 < grid.t_max;
    if !ok {
        return Err(LatticeError::InvalidStepWindow { t0, t1 });
    }
    ScalarField::from_fn(grid, Range::Unit, |t, _| step_profile((t - t0) / (t1 - t0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::make_grid;

    #[test]
    fn plateaus_and_midpoint() {
        assert_eq!(step_profile(-0.3), 0.0);
        assert_eq!(step_profile(1.2), 1.0);
        assert!((step_profile(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn flat_at_the_ends() {
        let g = make_grid(512, 4, 0.0, 1.0, 1.0, 1).unwrap();
        let (t0, t1) = (0.3, 0.7);
        let chi = smooth_step(&g, t0, t1).unwrap();
        for t in [t0, t1] {
            let n = g.level_of(t);
            let d = (chi.get(n + 1, 0) - chi.get(n - 1, 0)) / (2.0 * g.dt);
            assert!(d.abs() < 1e-12, "derivative {d} at t={t}");
        }
    }

    #[test]
    fn rejects_reversed_window() {
        let g = make_grid(16, 4, 0.0, 1.0, 1.0, 1).unwrap();
        assert!(smooth_step(&g, 0.6, 0.4).is_err());
        assert!(smooth_step(&g, 0.5, 0.5).is_err());
        assert!(smooth_step(&g, -0.1, 0.5).is_err());
    }
}
