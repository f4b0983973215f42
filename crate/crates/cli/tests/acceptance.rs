//! One PASS/FAIL line per acceptance criterion, with wall time against its
//! budget. Runs without the libtest harness so the lines always print.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use moellerlab_cli::report::Bound;
use moellerlab_cli::{run_scenario, Identity, Overrides, RunReport, Scenario, Suite, SuiteReport};

/// Criteria that cannot pass on the lattice cylinder, with the reason.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    6,
    "every chain from Minkowski to its rotation passes through metrics whose time orientation \
     points along the compact direction; they admit no splitting time function on the cylinder, so \
     no Green operators and no Møller operator exist for that chain",
)];

struct Outcome {
    criterion: u32,
    pass: bool,
    elapsed: Duration,
    budget: Duration,
    detail: String,
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn scenario(suites: &[Suite], grid: Option<(usize, usize)>, preset: Option<&str>) -> Scenario {
    let mut s = Scenario::selftest();
    s.apply(&Overrides { grid, preset: preset.map(str::to_owned), ..Overrides::default() });
    s.suites = suites.to_vec();
    s
}

fn run(s: &Scenario) -> (RunReport, Duration) {
    let start = Instant::now();
    let r = run_scenario(s).expect("scenario prepares");
    (r, start.elapsed())
}

fn suite(r: &RunReport, s: Suite) -> &SuiteReport {
    r.suite(s).expect("suite ran")
}

/// All identities picked by `select` pass, and at least one was picked.
fn passes_where(s: &SuiteReport, select: impl Fn(&Identity) -> bool) -> (bool, String) {
    let picked: Vec<_> = s.identities.iter().filter(|i| select(i)).collect();
    let failed: Vec<String> = picked.iter().filter(|i| !i.pass).map(|i| format!("{} = {:e}", i.identity, i.residual)).collect();
    let worst = picked.iter().filter(|i| i.bound == Bound::AtMost && i.tolerance > 0.0).map(|i| i.residual).fold(0.0_f64, f64::max);
    let detail = if failed.is_empty() {
        format!("{} identities, worst residual {worst:.2e}", picked.len())
    } else {
        format!("failed: {}", failed.join("; "))
    };
    (s.error.is_none() && !picked.is_empty() && failed.is_empty(), detail)
}

fn passes(s: &SuiteReport, prefixes: &[&str]) -> (bool, String) {
    passes_where(s, |i| prefixes.iter().any(|p| i.identity.starts_with(p)))
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn main() {
    let mut out = Vec::new();

    let (r, t) = run(&scenario(&[Suite::Cones], None, None));
    let (ok, d) = passes(suite(&r, Suite::Cones), &["convex", "sharp"]);
    out.push(Outcome { criterion: 1, pass: ok, elapsed: t, budget: secs(5), detail: d });

    let (rot, t1) = run(&scenario(&[Suite::Paracausal], None, Some("rotated-minkowski")));
    let rot_suite = suite(&rot, Suite::Paracausal);
    let cyl = Scenario::load(&configs().join("cylinder-reversed.json")).expect("bundled config");
    let (cyl, t2) = run(&cyl);
    let cyl_suite = suite(&cyl, Suite::Paracausal);
    let metrics = rot_suite.identity("metrics in chain").map(|i| i.residual).unwrap_or(f64::NAN);
    out.push(Outcome {
        criterion: 2,
        pass: rot_suite.pass && cyl_suite.pass,
        elapsed: t1 + t2,
        budget: secs(5),
        detail: format!(
            "rotated: {metrics} metrics, links revalidated = {}; reversed cylinder: certificate and closed curve = {}",
            rot_suite.pass, cyl_suite.pass
        ),
    });

    let (green, t) = run(&scenario(&[Suite::Green], Some((48, 48)), None));
    let g = suite(&green, Suite::Green);
    let inverse = ["N G+ f = f", "N G- f = f", "G+ N h = h", "G- N h = h"];
    let (ok, d) = passes_where(g, |i| inverse.contains(&i.identity.as_str()) || i.identity.starts_with("supp"));
    out.push(Outcome { criterion: 3, pass: ok, elapsed: t, budget: secs(10), detail: d });
    let exact = |i: &Identity| i.claim.ends_with("is exact");
    let four = g.identities.iter().filter(|i| exact(i)).count() == 4;
    let (ok, d) = passes_where(g, exact);
    out.push(Outcome { criterion: 4, pass: ok && four, elapsed: t, budget: secs(10), detail: d });
    let (ok, d) = passes(g, &["symplectic form relative spread", "<f, G h>"]);
    out.push(Outcome { criterion: 5, pass: ok, elapsed: t, budget: secs(10), detail: d });

    let (coarse, tc) = run(&scenario(&[Suite::Moller], Some((16, 16)), None));
    let (fine, tf) = run(&scenario(&[Suite::Moller], Some((32, 32)), None));
    let (rotm, tr) = run(&scenario(&[Suite::Moller], Some((16, 16)), Some("rotated-minkowski")));
    let mc = suite(&coarse, Suite::Moller);
    let mf = suite(&fine, Suite::Moller);
    let mr = suite(&rotm, Suite::Moller);
    let dense = mc.notes.iter().any(|n| n.contains("dense kernels"));
    let action = mf.notes.iter().any(|n| n.contains("dictionary actions"));
    let flat_ok = mc.pass && mf.pass && dense && action;
    let rotated_error = mr.error.clone().unwrap_or_default();
    out.push(Outcome {
        criterion: 6,
        pass: flat_ok && mr.pass,
        elapsed: tc + tf + tr,
        budget: secs(60),
        detail: format!(
            "flat->conformal 16x16 dense and 32x32 action: {}; rotated-Minkowski chain: {}",
            if flat_ok { "all identities pass" } else { "FAILED" },
            if mr.pass { "all identities pass".to_owned() } else { format!("no operator ({rotated_error})") }
        ),
    });
    assert!(flat_ok, "flat to conformal Møller identities: {mc:#?} {mf:#?}");
    assert!(!mr.pass && rotated_error.contains("splitting"), "rotated chain outcome changed: {mr:#?}");

    let (ok, d) = passes(mc, &["link ", "R^dagger action", "(R^-1)^dagger"]);
    out.push(Outcome { criterion: 7, pass: ok, elapsed: tc, budget: secs(10), detail: d });

    let (ccr, t) = run(&scenario(&[Suite::Ccr], None, None));
    let c = suite(&ccr, Suite::Ccr);
    let (ok, d) = passes(c, &["(ab)c", "6-point", "permutation", "commutator table", "R(", "map then", "min w"]);
    out.push(Outcome { criterion: 8, pass: ok && c.pass, elapsed: t, budget: secs(30), detail: d });

    let (had, t) = run(&scenario(&[Suite::Hadamard], None, None));
    let h = suite(&had, Suite::Hadamard);
    let labelled = h.proxy_for.as_deref() == Some(moellerlab_hadamard::PROXY_FOR);
    let (ok, d) = passes(h, &["hypothesis", "pulled-back", "lattice vacuum", "smooth", "rough"]);
    out.push(Outcome { criterion: 9, pass: ok && labelled, elapsed: t, budget: secs(120), detail: format!("{d}; proxy_for = {:?}", h.proxy_for) });

    let start = Instant::now();
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("determinism");
    let reports: Vec<Vec<u8>> = ["a", "b"]
        .iter()
        .map(|run| {
            let dir = tmp.join(run);
            let _ = std::fs::remove_dir_all(&dir);
            let mut s = Scenario::load(&configs().join("minkowski-selftest.json")).unwrap();
            s.output = Some(dir.clone());
            let status = Command::new(env!("CARGO_BIN_EXE_moellerlab"))
                .args(["run"])
                .arg(write_config(&s, &tmp, run))
                .env("MOELLERLAB_THREADS", if *run == "a" { "1" } else { "4" })
                .output()
                .expect("binary runs");
            assert_eq!(status.status.code(), Some(0));
            std::fs::read(dir.join("minkowski-selftest.json")).expect("report written")
        })
        .collect();
    let same = reports[0] == reports[1] && !reports[0].is_empty();
    out.push(Outcome {
        criterion: 10,
        pass: same,
        elapsed: start.elapsed(),
        budget: secs(600),
        detail: format!("two self-test reports of {} bytes, byte-identical = {same} (1 and 4 threads)", reports[0].len()),
    });

    let mut unexpected = Vec::new();
    for o in &out {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let time = if o.elapsed <= o.budget { "within" } else { "OVER" };
        println!(
            "criterion {:>2}: {verdict} ({:.2}s, {time} {}s budget) {}",
            o.criterion,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs(),
            o.detail
        );
        let known = KNOWN_UNATTAINABLE.iter().find(|(c, _)| *c == o.criterion);
        if let (false, Some((_, why))) = (o.pass, known) {
            println!("              known unattainable: {why}");
        }
        if !o.pass && known.is_none() {
            unexpected.push(o.criterion);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

fn write_config(s: &Scenario, dir: &Path, tag: &str) -> PathBuf {
    std::fs::create_dir_all(dir).unwrap();
    let path = dir.join(format!("selftest-{tag}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(s).unwrap()).unwrap();
    path
}
