use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::sample::SampledKernel;
use crate::HadamardError;

/// Largest admissible tail-energy ratio.
pub const TAIL_THRESHOLD: f64 = 1e-3;
/// Largest admissible growth of a discrete derivative when `dt` is halved.
pub const GROWTH_THRESHOLD: f64 = 4.0;
/// Highest order of the mixed differences.
pub const MAX_ORDER: usize = 3;
/// Differences below this fraction of `sup|scale|` are round-off; their
/// derivative growth is reported but not judged.
pub const NOISE_FLOOR: f64 = 1e-10;
/// What the smoothness proxy stands in for.
pub const PROXY_FOR: &str = "WF condition";

/// Tail-energy ratio of the slices at one time lag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagRatio {
    pub lag: isize,
    pub ratio: f64,
}

/// Largest `|Δ_t^a Δ_x^b D| / (dt^a dx^b)` with `a + b = order`, on the
/// sampled grid and on every other level of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeGrowth {
    pub order: usize,
    pub fine: f64,
    pub coarse: f64,
    pub growth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothnessReport {
    pub proxy_for: &'static str,
    /// Spatial frequencies above this count as tail.
    pub tail_cutoff: usize,
    pub lag_ratios: Vec<LagRatio>,
    pub tail_ratio: f64,
    pub derivatives: Vec<DerivativeGrowth>,
    pub max_growth: f64,
    /// `sup|D| ≤ NOISE_FLOOR · sup|scale|`.
    pub negligible: bool,
    pub tail_threshold: f64,
    pub growth_threshold: f64,
    pub tail_pass: bool,
    pub growth_pass: bool,
    pub pass: bool,
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        1.0
    } else {
        (num / den).clamp(0.0, 1.0)
    }
}

fn tail_energy(fft: &dyn rustfft::Fft<f64>, slice: &[Complex64], cutoff: usize) -> f64 {
    let nx = slice.len();
    let mut buf = slice.to_vec();
    fft.process(&mut buf);
    buf.iter().enumerate().filter(|(k, _)| (*k).min(nx - k) > cutoff).map(|(_, z)| z.norm_sqr()).sum()
}

fn forward_difference(rows: &[Vec<Complex64>], a: usize, b: usize) -> Vec<Vec<Complex64>> {
    let mut out = rows.to_vec();
    for _ in 0..a {
        out = out.windows(2).map(|w| w[1].iter().zip(&w[0]).map(|(x, y)| x - y).collect()).collect();
    }
    for _ in 0..b {
        for row in &mut out {
            let nx = row.len();
            *row = (0..nx).map(|j| row[(j + 1) % nx] - row[j]).collect();
        }
    }
    out
}

fn max_derivative(rows: &[Vec<Complex64>], a: usize, b: usize, dt: f64, dx: f64) -> f64 {
    let scale = dt.powi(a as i32) * dx.powi(b as i32);
    forward_difference(rows, a, b).iter().flatten().fold(0.0_f64, |m, z| m.max(z.norm())) / scale
}

/// Compares `difference` with `scale` slice by slice: spatial tail energy
/// above `3nx/8`, and growth of mixed differences from `2dt` to `dt`.
pub fn smoothness_proxy(difference: &SampledKernel, scale: &SampledKernel) -> Result<SmoothnessReport, HadamardError> {
    if difference.grid() != scale.grid() || difference.columns() != scale.columns() || difference.levels() != scale.levels() {
        return Err(HadamardError::GridMismatch);
    }
    let g = *difference.grid();
    let cutoff = 3 * g.nx / 8;
    let fft = FftPlanner::new().plan_fft_forward(g.nx);
    let mut tails: BTreeMap<isize, (f64, f64)> = BTreeMap::new();
    for (c, &q) in difference.columns().iter().enumerate() {
        let m = (q / g.nx) as isize;
        for n in difference.levels() {
            let e = tails.entry(n as isize - m).or_default();
            e.0 += tail_energy(fft.as_ref(), difference.slice(c, n), cutoff);
            e.1 += tail_energy(fft.as_ref(), scale.slice(c, n), cutoff);
        }
    }
    let lag_ratios: Vec<LagRatio> = tails.into_iter().map(|(lag, (d, s))| LagRatio { lag, ratio: ratio(d, s) }).collect();
    let tail_ratio = lag_ratios.iter().fold(0.0_f64, |m, r| m.max(r.ratio));

    let mut fine = [0.0; MAX_ORDER + 1];
    let mut coarse = [0.0; MAX_ORDER + 1];
    for c in 0..difference.columns().len() {
        let rows: Vec<Vec<Complex64>> = difference.levels().map(|n| difference.slice(c, n).to_vec()).collect();
        let every_other: Vec<Vec<Complex64>> = rows.iter().step_by(2).cloned().collect();
        for order in 1..=MAX_ORDER {
            for a in 0..=order {
                let b = order - a;
                fine[order] = f64::max(fine[order], max_derivative(&rows, a, b, g.dt, g.dx));
                coarse[order] = f64::max(coarse[order], max_derivative(&every_other, a, b, 2.0 * g.dt, g.dx));
            }
        }
    }
    let derivatives: Vec<DerivativeGrowth> = (1..=MAX_ORDER)
        .map(|order| {
            let (f, c) = (fine[order], coarse[order]);
            let growth = if f == 0.0 {
                0.0
            } else if c == 0.0 {
                f64::INFINITY
            } else {
                f / c
            };
            DerivativeGrowth { order, fine: f, coarse: c, growth }
        })
        .collect();
    let max_growth = derivatives.iter().fold(0.0_f64, |m, d| m.max(d.growth));
    let tail_pass = tail_ratio <= TAIL_THRESHOLD;
    let negligible = difference.sup_norm() <= NOISE_FLOOR * scale.sup_norm();
    let growth_pass = negligible || max_growth <= GROWTH_THRESHOLD;
    Ok(SmoothnessReport {
        proxy_for: PROXY_FOR,
        tail_cutoff: cutoff,
        lag_ratios,
        tail_ratio,
        derivatives,
        max_growth,
        negligible,
        tail_threshold: TAIL_THRESHOLD,
        growth_threshold: GROWTH_THRESHOLD,
        tail_pass,
        growth_pass,
        pass: tail_pass && growth_pass,
    })
}
