use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moellerlab"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("binary").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn reversed_cylinder_reports_the_certificate_and_exits_zero() {
    let o = bin().arg("run").arg(configs().join("cylinder-reversed.json")).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("orientation reversed at all 256 points"), "{text}");
    assert!(text.contains("closed causal curve"));
}

#[test]
fn malformed_config_exits_two_with_position() {
    let dir = scratch("malformed");
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\n  \"name\": \"x\",\n  \"grid\": { \"nt\": 8, \"nx\": 8 \n}").unwrap();
    let o = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("broken.json:4:"), "{err}");
}

#[test]
fn unresolved_metric_is_a_usage_error() {
    let dir = scratch("unresolved");
    let path = dir.join("dangling.json");
    std::fs::write(
        &path,
        r#"{"name": "d", "grid": {"nt": 8, "nx": 8}, "metrics": {"a": "minkowski"},
            "chain": {"auto": {"from": "a", "to": "b"}}, "suites": ["paracausal"]}"#,
    )
    .unwrap();
    let o = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown metric \"b\""));
}

#[test]
fn unmet_expectation_exits_one() {
    let o = bin().args(["chain", "--preset", "time-reversed(minkowski)"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn rotated_chain_summary_lists_four_metrics() {
    let o = bin().args(["chain", "--preset", "rotated-minkowski"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for k in 0..4 {
        assert!(text.contains(&format!("g{k} at ")), "{text}");
    }
    assert!(!text.contains("g4 at "));
}

#[test]
fn dense_green_kernels_are_written_as_csv() {
    let dir = scratch("dense");
    let o = bin().args(["green", "--grid", "16x16", "--dense-kernels", "--out"]).arg(&dir).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let read = |f: &str| -> Vec<Vec<f64>> {
        let text = std::fs::read_to_string(dir.join("minkowski-selftest").join(f)).unwrap();
        text.lines().map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
    };
    let (plus, minus, causal) = (read("green_plus.csv"), read("green_minus.csv"), read("causal.csv"));
    assert_eq!(plus.len(), 256);
    assert!(plus.iter().all(|r| r.len() == 256));
    for p in 0..256 {
        for q in 0..256 {
            assert!((causal[p][q] - (plus[p][q] - minus[p][q])).abs() <= 1e-12);
        }
    }
    // retarded response vanishes below the source level
    assert!((0..16).all(|p| plus[p][16 * 8] == 0.0));
    let report = std::fs::read_to_string(dir.join("minkowski-selftest.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(json["suites"][0]["suite"], "green");
    assert_eq!(json["pass"], true);
}

#[test]
fn converge_prints_measured_orders() {
    let o = bin().args(["converge", "--suite", "green", "--grids", "16,32,64"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("order 16->32") && text.contains("order 32->64"), "{text}");
}

#[test]
fn bad_flags_and_thread_caps_are_usage_errors() {
    assert_eq!(bin().args(["cones", "--grid", "16"]).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().arg("frobnicate").output().unwrap().status.code(), Some(2));
    let o = bin().arg("cones").env("MOELLERLAB_THREADS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
