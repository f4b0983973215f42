use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use moellerlab_cli::config::Study;
use moellerlab_cli::{run_scenarios, write_report, ConfigError, Overrides, RunReport, Scenario, Suite};

#[derive(Parser)]
#[command(name = "moellerlab", about = "Lattice checks of Møller operators between paracausally related metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every suite listed in each scenario file.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
    /// Cone sandwich for blends of random comparable metrics.
    Cones(Common),
    /// Chain search between the scenario metrics.
    Chain(Common),
    /// Green operator identities, supports, exact sequence, symplectic form.
    Green(Common),
    /// Møller operator identities along the chain.
    Moller(Common),
    /// CCR algebra, *-isomorphism and quasifree states.
    State(Common),
    /// Hadamard hypothesis, pulled-back conclusions, smoothness proxy.
    Hadamard(Common),
    /// Refinement study with measured orders.
    Converge {
        #[arg(long, value_enum, default_value = "green")]
        suite: ConvergeSuite,
        /// Comma-separated grid sizes: sites for green, time levels for hadamard.
        #[arg(long, value_delimiter = ',')]
        grids: Option<Vec<usize>>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvergeSuite {
    Green,
    Hadamard,
}

#[derive(Args)]
struct Common {
    /// Base scenario; the bundled self-test when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Time levels by sites, e.g. 64x64.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    #[arg(long)]
    mass: Option<f64>,
    /// Metric preset replacing the chain target.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dense_kernels: bool,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NTxNX, got {s:?}"))?;
    let nt = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let nx = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((nt, nx))
}

impl Common {
    fn scenario(&self, suite: Suite) -> Result<Scenario, ConfigError> {
        let mut s = match &self.config {
            Some(p) => Scenario::load(p)?,
            None => Scenario::selftest(),
        };
        s.apply(&Overrides {
            grid: self.grid,
            mass: self.mass,
            preset: self.preset.clone(),
            out: self.out.clone(),
            seed: self.seed,
            dense_kernels: self.dense_kernels,
        });
        s.suites = vec![suite];
        Ok(s)
    }
}

fn scenarios(command: Command) -> Result<Vec<Scenario>, ConfigError> {
    let single = |c: Common, suite| c.scenario(suite).map(|s| vec![s]);
    match command {
        Command::Run { configs } => configs.iter().map(|p| Scenario::load(p)).collect(),
        Command::Cones(c) => single(c, Suite::Cones),
        Command::Chain(c) => single(c, Suite::Paracausal),
        Command::Green(c) => single(c, Suite::Green),
        Command::Moller(c) => single(c, Suite::Moller),
        Command::State(c) => single(c, Suite::Ccr),
        Command::Hadamard(c) => single(c, Suite::Hadamard),
        Command::Converge { suite, grids, common } => {
            let mut s = common.scenario(Suite::Convergence)?;
            match suite {
                ConvergeSuite::Green => {
                    s.convergence.studies = vec![Study::Dalembert];
                    if let Some(g) = grids {
                        s.convergence.grids = g;
                    }
                }
                ConvergeSuite::Hadamard => {
                    s.convergence.studies = vec![Study::Hadamard];
                    if let Some(g) = grids {
                        s.hadamard.levels = g;
                    }
                }
            }
            Ok(vec![s])
        }
    }
}

fn print(report: &RunReport) {
    println!("scenario {}: {}", report.scenario, verdict(report.pass));
    for s in &report.suites {
        let passed = s.identities.iter().filter(|i| i.pass).count();
        println!("  {}: {} ({passed}/{} identities)", s.suite.name(), verdict(s.pass), s.identities.len());
        if let Some(p) = &s.proxy_for {
            println!("    proxy for: {p}");
        }
        for i in &s.identities {
            let op = match i.bound {
                moellerlab_cli::report::Bound::AtMost => "<=",
                moellerlab_cli::report::Bound::AtLeast => ">=",
            };
            let mark = if i.pass { "ok  " } else { "FAIL" };
            println!("    {mark} {}: {:.3e} {op} {:.1e}", i.identity, i.residual, i.tolerance);
        }
        for n in &s.notes {
            println!("    - {n}");
        }
        if let Some(e) = &s.error {
            println!("    error: {e}");
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("MOELLERLAB_THREADS") else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| format!("MOELLERLAB_THREADS: expected a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("MOELLERLAB_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let scenarios = match scenarios(cli.command) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut code = 0;
    for (scenario, result) in scenarios.iter().zip(run_scenarios(&scenarios)) {
        match result {
            Ok(report) => {
                print(&report);
                match write_report(scenario, &report) {
                    Ok(Some(path)) => println!("  report: {}", path.display()),
                    Ok(None) => {}
                    Err(e) => {
                        eprintln!("error: writing report for {}: {e}", scenario.name);
                        code = code.max(1);
                    }
                }
                if !report.pass {
                    code = code.max(1);
                }
            }
            Err(e) => {
                eprintln!("error: {}: {e}", scenario.name);
                code = 2;
            }
        }
    }
    ExitCode::from(code)
}
