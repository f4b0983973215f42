use std::f64::consts::{PI, TAU};

use moellerlab_lattice::{Range, ScalarField, SpacetimeGrid};

use crate::blend::squeeze_tensor;
use crate::tensor::{SymTensor2, TangentVector};
use crate::{GeometryError, MetricField};

/// Smooth bump centred in the time window, modulated along the circle.
pub fn bump(grid: &SpacetimeGrid, t: f64, x: f64) -> f64 {
    let tc = 0.5 * (grid.t_min + grid.t_max);
    let w = (grid.t_max - grid.t_min) / 6.0;
    (-((t - tc) / w).powi(2)).exp() * (1.0 + 0.3 * (TAU * x / grid.length).cos())
}

fn split_call(spec: &str) -> Result<(&str, Option<&str>), GeometryError> {
    let spec = spec.trim();
    match spec.find('(') {
        None => Ok((spec, None)),
        Some(i) if spec.ends_with(')') => Ok((spec[..i].trim(), Some(spec[i + 1..spec.len() - 1].trim()))),
        Some(_) => Err(GeometryError::UnknownPreset(spec.to_owned())),
    }
}

fn number(spec: &str, arg: Option<&str>) -> Result<f64, GeometryError> {
    arg.and_then(|a| a.parse::<f64>().ok())
        .filter(|v| v.is_finite())
        .ok_or_else(|| GeometryError::UnknownPreset(spec.to_owned()))
}

/// Builds a named metric on `grid`.
///
/// Recognized names: `minkowski`, `rotated-minkowski`, `conformal(a)`
/// (factor `1 + a·bump`), `scaled(c)`, `warped(a)` (`h = (1 + a sin πs)²`),
/// `ultrastatic(h)`, `squeezed(a)`, `boosted(v)` (cone narrowed by 1/4
/// around the observer of velocity `v`), `time-reversed(<preset>)`.
pub fn metric_preset(spec: &str, grid: &SpacetimeGrid) -> Result<MetricField, GeometryError> {
    let (name, arg) = split_call(spec)?;
    let dt_future = TangentVector::new(1.0, 0.0);
    match (name, arg) {
        ("minkowski", None) => Ok(MetricField::minkowski(grid)),
        ("rotated-minkowski", None) => {
            MetricField::constant(grid, SymTensor2::new(1.0, 0.0, -1.0), TangentVector::new(0.0, 1.0))
        }
        ("conformal", a) => {
            let a = number(spec, a)?;
            let mu = ScalarField::from_fn(&grid.with_rank(1)?, Range::Positive, |t, x| 1.0 + a * bump(grid, t, x))?;
            MetricField::minkowski(grid).conformal(&mu)
        }
        ("scaled", c) => {
            let c = number(spec, c)?;
            MetricField::constant(grid, SymTensor2::minkowski().scale(c), dt_future)
        }
        ("warped", a) => {
            let a = number(spec, a)?;
            let span = grid.t_max - grid.t_min;
            MetricField::from_fn(grid, |t, _| {
                let f = 1.0 + a * (PI * (t - grid.t_min) / span).sin();
                (SymTensor2::new(-1.0, 0.0, f * f), dt_future)
            })
        }
        ("ultrastatic", h) => MetricField::constant(grid, SymTensor2::new(-1.0, 0.0, number(spec, h)?), dt_future),
        ("squeezed", a) => MetricField::constant(grid, SymTensor2::new(-number(spec, a)?, 0.0, 1.0), dt_future),
        ("boosted", v) => {
            let v = number(spec, v)?;
            if v.abs() >= 1.0 {
                return Err(GeometryError::UnknownPreset(spec.to_owned()));
            }
            let u = TangentVector::new(1.0, v);
            MetricField::constant(grid, squeeze_tensor(&SymTensor2::minkowski(), u, 0.25), u)
        }
        ("time-reversed", Some(inner)) => Ok(metric_preset(inner, grid)?.time_reversed()),
        _ => Err(GeometryError::UnknownPreset(spec.to_owned())),
    }
}
