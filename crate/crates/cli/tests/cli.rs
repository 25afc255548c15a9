use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catalan-asym"))
        .args(args)
        .env_remove("CATALAN_ASYM_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    serde_json::from_str(&stdout(&out)).expect("json output")
}

#[test]
fn asym_a002457_coefficients() {
    let doc = json(&["asym", "a002457"]);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(
        doc["result"]["coeffs"],
        serde_json::json!(["1/1", "3/8", "-7/128", "9/1024"])
    );
    assert_eq!(doc["result"]["prefactor"], "2*sqrt(n/pi)");
    assert_eq!(doc["config"]["order"], 3);
}

#[test]
fn asym_table_lists_exact_rationals() {
    let out = run(&["asym", "catalan"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# catalan-asym asym\n# config: "));
    for line in ["0  1", "1  -5/8", "2  475/384", "3  1225/9216"] {
        assert!(text.lines().any(|l| l == line), "missing {line:?} in\n{text}");
    }
}

#[test]
fn high_order_warns_but_succeeds() {
    let out = run(&["asym", "central", "--order", "9"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn verify_asym_csv_columns() {
    let out = run(&["verify-asym", "central", "--n-list", "500,1000", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "n,exact,approx,ratio,residual,precision");
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("500,"));
    assert!(rows[1].ends_with(",256"));
}

#[test]
fn verify_asym_catalan_residual_tends_to_next_coefficient() {
    let doc = json(&["verify-asym", "catalan", "--order", "0", "--n", "20000"]);
    let residual: f64 = doc["result"]["rows"][0]["residual"].as_str().unwrap().parse().unwrap();
    assert!((residual + 5.0 / 8.0).abs() < 1e-3, "{residual}");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify-asym", "central", "--n-list", "100,200,400", "--format", "json"][..],
        &["weighted", "--alpha", "-1/4", "--n-list", "100,400", "--format", "csv"][..],
        &["modp", "--sweep", "300", "--format", "json"][..],
    ] {
        assert_eq!(stdout(&run(args)), stdout(&run(args)));
    }
    let one = stdout(&run(&["modp", "--sweep", "300", "--jobs", "1"]));
    let many = stdout(&run(&["modp", "--sweep", "300", "--jobs", "4"]));
    let strip = |s: &str| s.lines().skip(2).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&one), strip(&many));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_catalan-asym"))
        .args(["verify-asym", "central", "--n", "100", "--format", "json"])
        .env("CATALAN_ASYM_PRECISION", "128")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["config"]["precision"], 128);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify-asym", "central"][..],
        &["verify-asym", "central", "--n", "0"][..],
        &["verify-asym", "central", "--n", "10", "--precision", "16"][..],
        &["modp", "--q", "12"][..],
        &["modp", "--q", "1"][..],
        &["weighted", "--alpha", "0", "--n", "5"][..],
        &["weighted", "--alpha", "1/0", "--n", "5"][..],
        &["asym", "nonsense"][..],
        &["sum", "a002457", "--n", "5", "--alpha", "1/2"][..],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failing_rate_check_exits_one() {
    // At n = 1 the scaled residual is nowhere near its limit, so the spread check fails.
    let out = run(&["verify-asym", "central", "--order", "0", "--n-list", "1,4000"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).ends_with("status: fail\n"));
}

#[test]
fn modp_single_reports() {
    let doc = json(&["modp", "--q", "7", "--alpha", "2"]);
    assert_eq!(doc["status"], "pass");
    assert_eq!(doc["result"]["xd_detail"]["direct_value"], 4);
    assert_eq!(doc["result"]["weighted"]["central"], 0);
    assert_eq!(doc["result"]["central_poly"], serde_json::json!([1, 2, 6, 6]));

    let doc = json(&["modp", "--q", "8"]);
    assert_eq!(doc["status"], "pass");
    assert_eq!(
        doc["result"]["catalan_poly"],
        serde_json::json!([1, 1, 0, 1, 0, 0, 0, 1])
    );
    assert_eq!(doc["result"]["xd"], "n/a");
}

#[test]
fn modp_sweep_json_lines() {
    let out = run(&["modp", "--sweep", "50", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["schema_version"], 1);
    let body = &lines[1..lines.len() - 1];
    let qs: Vec<u64> = body.iter().map(|l| l["q"].as_u64().unwrap()).collect();
    let mut sorted = qs.clone();
    sorted.sort_unstable();
    assert_eq!(qs, sorted);
    assert_eq!(qs.len(), 23);
    for line in body {
        for key in [
            "q",
            "p",
            "e",
            "theorem3",
            "theorem4",
            "eq9_central",
            "eq9_catalan",
            "legendre",
            "xd",
        ] {
            assert!(line.get(key).is_some(), "{key} missing in {line}");
        }
    }
    assert_eq!(lines.last().unwrap()["status"], "pass");
}

#[test]
fn sum_exact_values() {
    let doc = json(&["sum", "central", "--n-list", "4,8"]);
    assert_eq!(doc["result"]["rows"][0]["sum"], "99");
    assert_eq!(doc["result"]["rows"][1]["sum"], "17577");
    let doc = json(&["sum", "catalan", "--n-list", "4,8"]);
    assert_eq!(doc["result"]["rows"][0]["sum"], "23");
    assert_eq!(doc["result"]["rows"][1]["sum"], "2056");
    let doc = json(&["sum", "central", "--n", "3", "--alpha", "0,1"]);
    // 1 + 2i - 6 - 20i
    assert_eq!(doc["result"]["rows"][0]["re"], "-5");
    assert_eq!(doc["result"]["rows"][0]["im"], "-18");
}

#[test]
fn weighted_regime_reports() {
    let doc = json(&["weighted", "--alpha", "1/4", "--n-list", "3,30"]);
    assert_eq!(doc["result"]["regime"], "(iv) alpha = 1/4");
    assert_eq!(doc["result"]["rows"][1]["exact_match"], true);
    assert_eq!(doc["status"], "pass");

    let doc = json(&["weighted", "--alpha", "1/2", "--n-list", "1000,2000"]);
    assert_eq!(doc["result"]["regime"], "(i) |alpha| > 1/4");
    assert_eq!(doc["status"], "pass");

    let doc = json(&["weighted", "--alpha", "1/8", "--kind", "catalan", "--n-list", "50,100"]);
    assert_eq!(doc["result"]["regime"], "(ii) |alpha| < 1/4");
    assert_eq!(doc["status"], "pass");
}
