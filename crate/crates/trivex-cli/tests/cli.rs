//! End-to-end checks of the binary: artifact shapes, exit codes, cache
//! behaviour.

use std::path::Path;
use std::process::{Command, Output};

fn trivex(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trivex"))
        .args(args)
        .args(["--out", dir.to_str().unwrap()])
        .args(["--cache", dir.join("cache").to_str().unwrap()])
        .output()
        .expect("binary runs")
}

#[test]
fn graph_command_writes_the_k2_transform() {
    let dir = tempfile::tempdir().unwrap();
    let out = trivex(
        &["graph", "--k", "2", "--which", "t", "--format", "edgelist"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("T2.edges")).unwrap();
    assert!(text.contains("vertices 64 edges 96"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 96);
    // header carries the tool version and input hash
    assert!(text.contains(&format!("# trivex {}", trivex::VERSION)));
    assert!(text.contains("# input "));
}

#[test]
fn spectrum_command_reports_t2() {
    let dir = tempfile::tempdir().unwrap();
    let out = trivex(&["spectrum", "--target", "T2"], dir.path());
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("spectrum_T2.json")).unwrap())
            .unwrap();
    let lam = doc["report"]["lambda1"].as_f64().unwrap();
    assert!((lam - 2.414213).abs() < 1e-5);
    assert_eq!(doc["report"]["ramanujan"], serde_json::Value::Bool(true));
}

#[test]
fn faces_command_writes_the_summary_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = trivex(&["faces", "--k", "2"], dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("surfaces.csv")).unwrap();
    assert!(csv.contains("k,N_k,n_k,V,E,F,face_len,genus,genus_hurwitz,ratio,hat_genus"));
    assert!(csv.contains("2,5,2,64,96,24,8,5,5,5/16,33"));
}

#[test]
fn render_is_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(trivex(&["render", "--k", "2", "--radius", "1"], dir.path())
        .status
        .success());
    let first = std::fs::read(dir.path().join("disk_k2_r1.svg")).unwrap();
    assert!(trivex(&["render", "--k", "2", "--radius", "1"], dir.path())
        .status
        .success());
    let second = std::fs::read(dir.path().join("disk_k2_r1.svg")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn verify_all_k3_reports_the_known_red_row() {
    // the dense-only subset: every row but the non-monotonicity claim of
    // AC09 passes, so the exit code is 1 and the ledger shows 12/13
    let dir = tempfile::tempdir().unwrap();
    let out = trivex(&["verify-all", "--k-max", "3"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let ledger: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ledger.json")).unwrap())
            .unwrap();
    let rows = ledger["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    for row in rows {
        let pass = row["pass"].as_bool().unwrap();
        let id = row["id"].as_str().unwrap();
        assert_eq!(pass, id != "AC09", "unexpected status for {id}");
    }
}

#[test]
fn warm_cache_reproduces_the_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |path: &Path| -> serde_json::Value {
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        for row in v["rows"].as_array_mut().unwrap() {
            row.as_object_mut().unwrap().remove("runtime_ms");
        }
        v
    };
    trivex(&["verify-all", "--k-max", "2"], dir.path());
    let cold = strip(&dir.path().join("ledger.json"));
    trivex(&["verify-all", "--k-max", "2"], dir.path());
    let warm = strip(&dir.path().join("ledger.json"));
    assert_eq!(cold, warm);
    assert!(dir.path().join("cache").read_dir().unwrap().next().is_some());
}

#[test]
fn usage_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = trivex(&["group", "--k", "9"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = trivex(&["faces"], dir.path()); // missing --k
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_env_var_overrides_the_directory() {
    let dir = tempfile::tempdir().unwrap();
    let env_cache = dir.path().join("envcache");
    let out = Command::new(env!("CARGO_BIN_EXE_trivex"))
        .args(["group", "--k", "2"])
        .args(["--out", dir.path().to_str().unwrap()])
        .env("TRIVEX_CACHE", env_cache.to_str().unwrap())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(env_cache.read_dir().unwrap().next().is_some());
}
