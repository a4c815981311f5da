use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gesforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gesforge"))
        .args(args)
        .env_remove("GESFORGE_SEED")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn construct(dir: &Path, name: &str, args: &[&str]) -> std::path::PathBuf {
    let out = dir.join(name);
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path(&out)]);
    let run = gesforge(&all);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    out
}

#[test]
fn three_qubit_example_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = construct(dir.path(), "v.json", &["--n", "3", "--d", "2", "--k", "5"]);
    let report = dir.path().join("r.json");
    let run = gesforge(&["verify", "--in", path(&vectors), "--out", path(&report)]);
    assert_eq!(run.status.code(), Some(0));
    let r = read(&report);
    assert_eq!(r["passed"], true);
    assert_eq!(r["exact"]["rank_full"], true);
    assert_eq!(r["numeric"]["bipartitions"].as_array().unwrap().len(), 3);
    assert_eq!(r["config"]["command"], "verify");
    assert_eq!(r["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["schema_version"], 1);
}

#[test]
fn invalid_parameters_exit_2() {
    let run = gesforge(&["construct", "--n", "3", "--d", "2", "--k", "8"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("exceeds"));
    for args in [
        vec!["construct", "--n", "3", "--d", "2", "--k", "3"],
        vec!["construct", "--n", "3", "--d", "2", "--k", "5", "--p", "9"],
        vec!["construct", "--n", "3", "--d", "2", "--k", "5", "--p", "5"],
        vec!["construct", "--n", "3", "--d", "2"],
        vec!["construct", "--n", "2", "--dims", "2,3,2", "--k", "4"],
        vec!["chebotarev", "--p", "1"],
        vec!["verify", "--in", "/nonexistent/vectors.json"],
    ] {
        assert_eq!(gesforge(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn heterogeneous_construct() {
    let dir = tempfile::tempdir().unwrap();
    let v = read(&construct(dir.path(), "v.json", &["--n", "2", "--dims", "2,3", "--k", "4"]));
    assert_eq!(v["params"]["p"], 7);
    assert_eq!(v["ges_dimension"], 2);
}

#[test]
fn duplicated_vector_fails_rank() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = construct(dir.path(), "v.json", &["--n", "3", "--d", "2", "--k", "5"]);
    let mut doc = read(&vectors);
    let first = doc["exponent_table"][0].clone();
    doc["exponent_table"][3] = first;
    let tampered = dir.path().join("t.json");
    std::fs::write(&tampered, doc.to_string()).unwrap();
    let report = dir.path().join("r.json");
    let run = gesforge(&["verify", "--in", path(&tampered), "--out", path(&report)]);
    assert_eq!(run.status.code(), Some(1));
    let r = read(&report);
    assert_eq!(r["exact"]["rank_full"], false);
    assert_eq!(r["instance"]["provenance"], "user-supplied");
    let failures = r["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f.as_str().unwrap().starts_with("rank_full")));
}

#[test]
fn user_table_is_verified_and_labelled() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = construct(dir.path(), "v.json", &["--n", "3", "--d", "2", "--k", "5"]);
    let mut doc = read(&vectors);
    // k = i·s·(1, 3, 9) instead of the mixed-radix weights
    for i in 0..5u64 {
        for (m, w) in [1u64, 3, 9].iter().enumerate() {
            doc["exponent_table"][i as usize][m][1] = Value::String(((i * w) % 11).to_string());
        }
    }
    let user = dir.path().join("u.json");
    std::fs::write(&user, doc.to_string()).unwrap();
    let report = dir.path().join("r.json");
    let run = gesforge(&["verify", "--in", path(&user), "--out", path(&report)]);
    assert!(matches!(run.status.code(), Some(0) | Some(1)));
    let r = read(&report);
    assert_eq!(r["instance"]["provenance"], "user-supplied");
    assert_eq!(r["exact"]["provenance"], "user-supplied");
    assert_eq!(r["passed"].as_bool().unwrap(), run.status.code() == Some(0));
}

#[test]
fn scale_files() {
    let dir = tempfile::tempdir().unwrap();
    let exact = dir.path().join("h.json");
    std::fs::write(&exact, r#"{"h": [["1", "-2/3"], ["5", {"re": "1", "im": "1"}], ["7/2", "1"]]}"#).unwrap();
    let report = dir.path().join("r.json");
    let run = gesforge(&[
        "verify", "--n", "3", "--d", "2", "--k", "5", "--h-file", path(&exact), "--restarts", "10", "--out",
        path(&report),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let r = read(&report);
    assert_eq!(r["exact"]["field_order"], 44);

    let float = dir.path().join("f.json");
    std::fs::write(&float, "[[1.0, 0.5], [2.0, 1.0], [1.0, 1.0]]").unwrap();
    let run = gesforge(&[
        "verify", "--n", "3", "--d", "2", "--k", "5", "--h-file", path(&float), "--restarts", "10", "--out",
        path(&report),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let r = read(&report);
    assert!(r["exact"].is_null());
    assert!(r["exact_skipped"].is_string());
    assert_eq!(r["basis"]["rank_certified"], false);

    std::fs::write(&float, r#"[["1", "0"], ["1", "1"], ["1", "1"]]"#).unwrap();
    let run = gesforge(&["construct", "--n", "3", "--d", "2", "--k", "5", "--h-file", path(&float)]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let run = Command::new(env!("CARGO_BIN_EXE_gesforge"))
        .args(["verify", "--n", "2", "--d", "2", "--k", "3", "--restarts", "5", "--out", path(&report)])
        .env("GESFORGE_SEED", "1234")
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(read(&report)["seed"], 1234);
    assert_eq!(read(&report)["config"]["options"]["seed"], 1234);
}

#[test]
fn equal_seeds_give_identical_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let run = gesforge(&["verify", "--n", "2", "--d", "3", "--k", "5", "--seed", "9", "--out", path(out)]);
        assert_eq!(run.status.code(), Some(0));
    }
    assert_eq!(read(&a)["numeric"], read(&b)["numeric"]);
}

#[test]
fn chebotarev_reports() {
    let run = gesforge(&["chebotarev", "--p", "7", "--max-size", "5"]);
    assert_eq!(run.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert!(r["scan"]["witnesses"].as_array().unwrap().is_empty());

    let run = gesforge(&["chebotarev", "--p", "4", "--max-size", "2"]);
    assert_eq!(run.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&run.stdout).unwrap();
    let first = &r["scan"]["witnesses"][0];
    assert_eq!(first["rows"], serde_json::json!([0, 2]));
    assert_eq!(first["cols"], serde_json::json!([0, 2]));

    let run = gesforge(&["chebotarev", "--p", "3", "--max-size", "7"]);
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stderr).contains("clamped"));
    let r: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(r["scan"]["max_size"], 3);
    assert_eq!(r["clamped"], true);
}

#[test]
fn basis_file() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = construct(dir.path(), "v.json", &["--n", "3", "--d", "2", "--k", "5"]);
    let run = gesforge(&["basis", "--in", path(&vectors)]);
    assert_eq!(run.status.code(), Some(0));
    let b: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(b["dimension"], 3);
    assert_eq!(b["columns"].as_array().unwrap().len(), 3);
    assert_eq!(b["columns"][0]["re"].as_array().unwrap().len(), 8);
    assert!(b["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn report_reruns_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let run = gesforge(&["verify", "--n", "3", "--d", "2", "--k", "6", "--restarts", "10", "--out", path(&report)]);
    assert_eq!(run.status.code(), Some(0));
    let run = gesforge(&["report", "--in", path(&report), "--rerun"]);
    assert_eq!(run.status.code(), Some(0));
    let s: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(s["rerun"]["verdicts_equal"], true);
    assert_eq!(s["source_kind"], "verify-report");

    let cheb = dir.path().join("c.json");
    let run = gesforge(&["chebotarev", "--p", "6", "--max-size", "2", "--out", path(&cheb)]);
    assert_eq!(run.status.code(), Some(1));
    let run = gesforge(&["report", "--in", path(&cheb)]);
    assert_eq!(run.status.code(), Some(1));
    let s: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert!(!s["failures"].as_array().unwrap().is_empty());
}

/// Instances whose true biproduct minimum is below the default threshold.
const SMALL_MINIMA: [(usize, usize, usize); 8] =
    [(2, 4, 9), (3, 3, 11), (3, 3, 12), (3, 3, 13), (3, 3, 14), (3, 3, 15), (3, 3, 16), (3, 3, 17)];

#[test]
fn construct_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (d, n) in [(2usize, 2usize), (2, 3), (2, 4), (3, 2)] {
        for k in d.pow(n as u32 - 1) + d - 1..d.pow(n as u32) {
            let (ds, ns, ks) = (d.to_string(), n.to_string(), k.to_string());
            let vectors = construct(dir.path(), "v.json", &["--n", &ns, "--d", &ds, "--k", &ks]);
            let report = dir.path().join("r.json");
            let run = gesforge(&["verify", "--in", path(&vectors), "--out", path(&report)]);
            let r = read(&report);
            assert_eq!(r["exact"]["passed"], true, "({d},{n},{k})");
            if SMALL_MINIMA.contains(&(d, n, k)) {
                assert_eq!(run.status.code(), Some(1));
                let failures = r["failures"].as_array().unwrap();
                assert!(failures.iter().all(|f| f.as_str().unwrap().starts_with("numeric")));
            } else {
                assert_eq!(run.status.code(), Some(0), "({d},{n},{k}): {}", r["failures"]);
            }
        }
    }
}
