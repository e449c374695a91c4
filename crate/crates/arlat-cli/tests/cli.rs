use std::process::{Command, Output};

use serde_json::Value;

fn arlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arlat"))
        .args(args)
        .env_remove("ARLAT_PRECISION")
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn preset(name: &str) -> String {
    format!("{}/../../presets/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn repzeta_check_ends_ok() {
    let o = arlat(&["repzeta", "check", "--q", "5", "--levels", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["op"], "arlat::repzeta::sum_of_squares_check");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["result"]["ledger"].as_str().unwrap().ends_with("OK\n"));
    let pretty = arlat(&[
        "repzeta", "check", "--q", "5", "--levels", "4", "--output", "pretty",
    ]);
    assert_eq!(
        String::from_utf8(pretty.stdout).unwrap().lines().last(),
        Some("OK")
    );
}

#[test]
fn malformed_polynomial_is_a_parse_error() {
    let o = arlat(&["mahler", "measure", "--poly", "x^2 + + 1"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["command"], "mahler measure");
}

#[test]
fn module_errors_exit_one() {
    let o = arlat(&["nf", "lvalue", "--d", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["kind"], "domain");
}

#[test]
fn ratio_table_has_six_rows() {
    let o = arlat(&["volume", "ratios", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"].as_array().unwrap().len(), 6);
    let csv = arlat(&["volume", "ratios", "--all", "--output", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 7);
}

#[test]
fn usage_errors() {
    assert_eq!(
        arlat(&["suite", "--profile", "quik"]).status.code(),
        Some(2)
    );
    assert_eq!(arlat(&["nf", "info"]).status.code(), Some(2));
    assert_eq!(arlat(&["volume", "ratios"]).status.code(), Some(2));
}

#[test]
fn sampled_commands_need_a_seed() {
    let o = arlat(&["nerve", "run", "--samples", "400"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(json(&o)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("--seed"));
    let k = arlat(&[
        "conjcount",
        "kl",
        "--n",
        "50",
        "--a",
        "1",
        "--candidates",
        "100",
    ]);
    assert_eq!(k.status.code(), Some(2));
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let args = [
        "nerve",
        "run",
        "--space",
        "torus2",
        "--samples",
        "10000",
        "--seed",
        "7",
    ];
    let (a, b) = (arlat(&args), arlat(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["result"]["run"]["centers"], 165);
    assert_eq!(v["result"]["run"]["degree"]["max_degree"], 24);
    let csv = String::from_utf8(arlat(&[&args[..], &["--output", "csv"]].concat()).stdout).unwrap();
    assert!(csv.starts_with("degree,count\n"));
}

#[test]
fn config_file_fills_missing_flags() {
    let o = arlat(&[
        "nerve",
        "run",
        "--config",
        &preset("torus2.conf"),
        "--summary-only",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["result"]["run"]["samples"], 10000);
    assert!(v["result"].get("complex").is_none());

    let path = std::env::temp_dir().join(format!("arlat-cli-test-{}.conf", std::process::id()));
    std::fs::write(&path, "q = 5\nlevels = 2\nbogus = 1\n").unwrap();
    let bad = arlat(&["repzeta", "check", "--config", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn precision_from_environment_and_flag() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_arlat"));
        c.args(["geom", "distance", "--x", "2,0;0,1", "--y", "1,1;0,1"])
            .args(extra)
            .env_remove("ARLAT_PRECISION");
        if let Some(e) = env {
            c.env("ARLAT_PRECISION", e);
        }
        json(&c.output().unwrap())
    };
    assert_eq!(run(None, &[])["precision"], "f64");
    assert_eq!(run(Some("dd"), &[])["precision"], "dd");
    assert_eq!(run(Some("dd"), &["--precision", "f64"])["precision"], "f64");
    let (a, b) = (run(None, &[]), run(Some("dd"), &[]));
    let (x, y) = (
        a["result"]["distance"].as_f64().unwrap(),
        b["result"]["distance"].as_f64().unwrap(),
    );
    assert!((x - y).abs() < 1e-14);
}

#[test]
fn tree_fixed_reports_vertices_edges_counts() {
    let v = json(&arlat(&[
        "tree", "fixed", "--p", "3", "--matrix", "4,0;0,1", "--radius", "4",
    ]));
    let r = &v["result"];
    assert_eq!(
        r["counts"]["vertices"],
        r["vertices"].as_array().unwrap().len()
    );
    assert_eq!(r["counts"]["edges"], r["edges"].as_array().unwrap().len());
}

#[test]
fn gram_preset_file_matches_default() {
    let a = json(&arlat(&[
        "conjcount",
        "gram",
        "--family",
        &preset("salem.json"),
    ]));
    let b = json(&arlat(&["conjcount", "gram"]));
    assert_eq!(a["result"]["exact_gram"], b["result"]["exact_gram"]);
    assert_eq!(a["result"]["exact_gram"][0][0], "11/5");
}

#[test]
fn covolume_from_spec_file() {
    let v = json(&arlat(&[
        "volume",
        "covolume",
        "--spec",
        &preset("spec_q_2_3.json"),
    ]));
    assert_eq!(v["result"]["symbolic"], "π/3");
    let w = json(&arlat(&[
        "volume", "covolume", "--ram", "2,3", "--index", "4",
    ]));
    assert_eq!(w["result"]["symbolic"], "4π/3");
}

#[test]
fn quick_suite_passes() {
    let o = arlat(&["suite", "--profile", "quick", "--output", "pretty"]);
    let text = String::from_utf8(o.stdout).unwrap();
    print!("{text}");
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().count(), 17);
    assert!(text.lines().filter(|l| l.starts_with("[FAIL]")).count() == 0);
}
