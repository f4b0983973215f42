mod ccr;
mod cones;
mod convergence;
mod green;
mod hadamard;
mod moller;
mod paracausal;

pub use convergence::dalembert_error;

use crate::config::Suite;
use crate::context::Context;
use crate::report::SuiteReport;

/// Stream ids handed to [`Context::rng`].
mod stream {
    pub const CONES: u64 = 1;
    pub const GREEN: u64 = 2;
    pub const CCR: u64 = 3;
    pub const HADAMARD: u64 = 4;
}

pub fn run_suite(ctx: &Context, suite: Suite) -> SuiteReport {
    let mut report = SuiteReport::new(suite);
    let outcome = match suite {
        Suite::Cones => cones::run(ctx, &mut report),
        Suite::Paracausal => paracausal::run(ctx, &mut report),
        Suite::Green => green::run(ctx, &mut report),
        Suite::Moller => moller::run(ctx, &mut report),
        Suite::Ccr => ccr::run(ctx, &mut report),
        Suite::Hadamard => hadamard::run(ctx, &mut report),
        Suite::Convergence => convergence::run(ctx, &mut report),
    };
    if let Err(e) = outcome {
        report.error = Some(format!("{e:#}"));
    }
    report.finish()
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
