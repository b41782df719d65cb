use std::fs;
use std::process::{Command, Output};

fn sepcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepcorr"))
        .args(args)
        .env_remove("SEPCORR_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn ratio_table_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ratio.csv");
    let o = sepcorr(&["ratio", "5", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("ratio[N=5]"));
    let rows = fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("scenario,name,value"));
    let ratio5 = rows
        .lines()
        .find(|l| l.contains("ratio[N=5]"))
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse::<f64>()
        .unwrap();
    assert!((ratio5 / 243.0 - 1.0).abs() < 1e-12);
}

#[test]
fn tensor_jsonl_records() {
    let o = sepcorr(&["tensor", "bell", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let records: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect();
    let zz = records
        .iter()
        .find(|r| r["name"] == "T[zz]")
        .expect("T[zz] record");
    assert_eq!(zz["value"].as_f64(), Some(1.0));
}

#[test]
fn scalar_product_of_pure_product() {
    let o = sepcorr(&["scalar-product", "pure:0.3,1.0;2.0,4.0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("exact-sp-saturation"));
}

#[test]
fn lhv_compact_models() {
    assert_eq!(sepcorr(&["lhv", "saturating:2"]).status.code(), Some(0));
    let o = sepcorr(&["lhv", "simulator:0,0.6,0@2000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn lhv_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.toml");
    fs::write(
        &path,
        r#"
kind = "ensemble"
n_parties = 2

[[member]]
weight = 0.5
responses = [{ kind = "sign-of-cos-theta" }, { kind = "constant", value = 1 }]

[[member]]
weight = 0.5
responses = [{ kind = "sign-of-dot-product-with", vector = [1.0, 0.0, 0.0] }, { kind = "constant", value = -1 }]
"#,
    )
    .unwrap();
    let o = sepcorr(&["lhv", path.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn run_scenario_file_and_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ghz.toml");
    fs::write(
        &path,
        "name = \"ghz4\"\nn_parties = 4\n[state]\nkind = \"ghz\"\nn_parties = 4\n",
    )
    .unwrap();
    let out = dir.path().join("reports");
    let o = Command::new(env!("CARGO_BIN_EXE_sepcorr"))
        .args(["run", path.to_str().unwrap()])
        .env("SEPCORR_OUT_DIR", &out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let jsonl = fs::read_to_string(out.join("ghz4.jsonl")).unwrap();
    assert!(jsonl.lines().count() > 10);
}

#[test]
fn exit_codes() {
    // configuration errors
    assert_eq!(sepcorr(&["run", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(sepcorr(&["tensor", "pure:4.0,0"]).status.code(), Some(2));
    assert_eq!(sepcorr(&["ratio", "0"]).status.code(), Some(2));
    assert_eq!(sepcorr(&["--n-theta", "0", "ratio"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "name = \"x\"\nn_parties = 2\nbogus = 1\n").unwrap();
    let o = sepcorr(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    // verdict failure: tolerance tighter than floating point
    let o = sepcorr(&["--quadrature-tol", "1e-17", "run", "bell-witness"]);
    assert_eq!(o.status.code(), Some(1));

    // resource error: six 32-node spheres exceed the quadrature budget
    let o = sepcorr(&["lhv", "saturating:6"]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn verify_capped_subset() {
    let o = sepcorr(&["verify", "--max-n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("ALL PASS"));
}

#[test]
fn verify_is_deterministic() {
    let a = sepcorr(&["verify", "--format", "jsonl", "--seed", "7"]);
    let b = sepcorr(&["verify", "--format", "jsonl", "--seed", "7"]);
    let strip = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| !l.contains("duration"))
            .map(str::to_owned)
            .collect::<Vec<_>>()
    };
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn verify_reports_every_failure_under_tight_tolerance() {
    // compensated quadrature agrees to a few ulps, so only sub-ulp tolerances fail
    let o = sepcorr(&["verify", "--quadrature-tol", "1e-16"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("[FAIL]"));
    // aggregation never stops early: the last suite is still reported
    assert!(text.contains("property:violation-ratio"));
    assert!(text.contains("FAILURES"));
}
