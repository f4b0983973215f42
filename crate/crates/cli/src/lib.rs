//! Scenario runner: reads a JSON scenario, builds grids, metrics, chains and
//! operators, runs the requested verification suites and writes one JSON
//! report per scenario.

pub mod config;
mod context;
pub mod report;
mod sample;
mod suites;

use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;

pub use config::{ConfigError, Overrides, Scenario, Suite};
pub use context::{ChainOutcome, Context};
pub use report::{Identity, RunReport, SuiteReport};
pub use suites::{dalembert_error, run_suite};

/// Runs every requested suite in dependency order.
pub fn run_scenario(scenario: &Scenario) -> Result<RunReport, ConfigError> {
    let prepared = scenario.prepare()?;
    let ctx = Context::new(scenario, prepared);
    let mut order = scenario.suites.clone();
    order.sort();
    order.dedup();
    let suites: Vec<SuiteReport> = order.into_iter().map(|s| run_suite(&ctx, s)).collect();
    Ok(RunReport {
        scenario: scenario.name.clone(),
        seed: scenario.seed,
        pass: suites.iter().all(|s| s.pass),
        suites,
    })
}

/// Independent scenarios in parallel; results keep the input order.
pub fn run_scenarios(scenarios: &[Scenario]) -> Vec<Result<RunReport, ConfigError>> {
    scenarios.par_iter().map(run_scenario).collect()
}

/// Writes `<output>/<name>.json` when the scenario names an output.
pub fn write_report(scenario: &Scenario, report: &RunReport) -> std::io::Result<Option<PathBuf>> {
    let Some(dir) = &scenario.output else { return Ok(None) };
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.json", scenario.name));
    fs::write(&path, report.to_json())?;
    Ok(Some(path))
}
