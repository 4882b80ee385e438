use std::f64::consts::PI;
use std::process::{Command, Output};

use cohphase_cli::output::Table;

fn cohphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohphase")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn table(args: &[&str]) -> Table {
    Table::from_csv(&stdout(&cohphase(args))).unwrap()
}

fn column(t: &Table, name: &str) -> Vec<f64> {
    t.column(name).unwrap().into_iter().map(Option::unwrap).collect()
}

fn assert_fails(out: &Output, code: i32, name: &str) {
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(code), "stderr: {stderr}");
    assert!(stderr.contains(name), "stderr: {stderr}");
}

/// Sign changes of a column, located by linear interpolation.
fn zero_crossings(z: &[f64], s: &[Option<f64>]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..z.len() {
        if let (Some(a), Some(b)) = (s[i - 1], s[i]) {
            if a.signum() != b.signum() {
                out.push(z[i - 1] + a / (a - b) * (z[i] - z[i - 1]));
            }
        }
    }
    out
}

#[test]
fn distribution_is_symmetric_with_2001_rows() {
    let t = table(&["dist", "--system", "penson-solomon", "--param", "q=0.5", "--z", "1.0"]);
    assert_eq!(t.header, ["theta", "P"]);
    assert_eq!(t.rows.len(), 2001);
    let p = column(&t, "P");
    for i in 0..p.len() {
        assert!((p[i] - p[p.len() - 1 - i]).abs() < 1e-12);
    }
}

#[test]
fn outside_the_disk_is_a_numerical_error() {
    let out = cohphase(&["dist", "--system", "gilmore-perelomov", "--param", "kappa=3", "--z", "1.5"]);
    assert_fails(&out, 3, "DomainExceeded");
    assert!(out.stdout.is_empty());
}

#[test]
fn vacuum_distribution_is_flat() {
    let t = table(&["dist", "--system", "harmonic", "--z", "0"]);
    for p in column(&t, "P") {
        assert!((p - 0.5 / PI).abs() < 1e-12);
    }
}

#[test]
fn sweep_columns_are_named_by_z() {
    let t = table(&["dist", "--system", "isotonic", "--lo", "0.5", "--hi", "2", "--count", "4", "--theta-grid", "11"]);
    assert_eq!(t.header, ["theta", "P_z0.5", "P_z1.0", "P_z1.5", "P_z2.0"]);
    assert_eq!(t.rows.len(), 11);
    let preset = table(&["dist", "--preset", "fig11", "--theta-grid", "11"]);
    assert_eq!(preset, t);
}

#[test]
fn hydrogen_number_squeezing_ends_near_042() {
    let t = table(&["squeeze", "--system", "hydrogen", "--lo", "0.05", "--hi", "0.95", "--count", "91"]);
    assert_eq!(t.header, ["z", "var_n", "var_phi", "commutator", "S_n", "S_phi"]);
    let crossings = zero_crossings(&column(&t, "z"), &t.column("S_n").unwrap());
    assert_eq!(crossings.len(), 1);
    assert!((crossings[0] - 0.42).abs() < 0.05, "{crossings:?}");
}

#[test]
fn isotonic_phase_squeezing_starts_near_22() {
    let t = table(&["squeeze", "--system", "isotonic", "--lo", "0.1", "--hi", "4", "--count", "79"]);
    let crossings = zero_crossings(&column(&t, "z"), &t.column("S_phi").unwrap());
    assert_eq!(crossings.len(), 1);
    assert!((crossings[0] - 2.2).abs() < 0.05, "{crossings:?}");
}

#[test]
fn squeezing_is_blank_at_the_vacuum() {
    let text = stdout(&cohphase(&["squeeze", "--system", "barut-girardello", "--lo", "0", "--hi", "1", "--count", "3"]));
    let first = text.lines().nth(1).unwrap();
    assert_eq!(first, "0.0,0.0,3.289868133696453,0.0,,");
}

#[test]
fn crossover_writes_json() {
    let out = stdout(&cohphase(&[
        "crossover", "--system", "poschl-teller", "--param", "nu=5", "--which", "Sphi", "--lo", "0.1", "--hi", "4",
        "--count", "391",
    ]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["system"], "poschl-teller");
    assert_eq!(doc["params"]["nu"], 5.0);
    assert_eq!(doc["which"], "Sphi");
    assert_eq!(doc["tol"], 1e-4);
    let roots = doc["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 1);
    assert!((roots[0].as_f64().unwrap() - 2.84).abs() < 0.15);
}

#[test]
fn harmonic_number_squeezing_has_one_crossover() {
    // S_n = 2|z|²/|1 - 2πP(-π)| - 1 runs from about -0.9 at z = 0.1 to 49 at z = 5.
    let out = stdout(&cohphase(&["crossover", "--system", "harmonic", "--lo", "0.1", "--hi", "5", "--count", "50"]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let roots = doc["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 1);
    assert!((roots[0].as_f64().unwrap() - 0.622).abs() < 1e-3);
}

#[test]
fn check_passes_for_the_infinite_well() {
    let out = cohphase(&["check", "--system", "infinite-well"]);
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.ends_with("PASS")));
}

#[test]
fn check_rejects_a_shifted_spectrum() {
    let out = cohphase(&["check", "--system", "dsl", "--kind", "e", "--expr", "n*(n+5)+1"]);
    assert_fails(&out, 2, "SpectrumGroundNotZero");
}

#[test]
fn check_all_covers_the_catalog() {
    let text = stdout(&cohphase(&["check", "--all"]));
    let mut systems: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    systems.dedup();
    assert_eq!(systems.len(), 8);
}

#[test]
fn failed_invariant_exits_with_one() {
    // A truncation this loose breaks the normalization check.
    let out = cohphase(&["check", "--system", "harmonic", "--tail-tol", "1e-4"]);
    assert_fails(&out, 1, "InvariantFailed");
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn csv_output_round_trips() {
    for args in [
        &["squeeze", "--system", "gilmore-perelomov", "--lo", "0", "--hi", "0.9", "--count", "31"][..],
        &["dist", "--system", "hydrogen", "--lo", "0.2", "--hi", "0.8", "--count", "4"][..],
    ] {
        let text = stdout(&cohphase(args));
        assert_eq!(Table::from_csv(&text).unwrap().to_csv(), text);
    }
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let (from_flags, from_config) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        format!(
            r#"{{
  "system": {{"id": "barut-girardello", "params": {{"kappa": 2.5}}}},
  "z_sweep": {{"lo": 0.0, "hi": 3.0, "count": 13}},
  "theta_grid": 2001,
  "window_theta0": -3.141592653589793,
  "output": {{"path": {:?}, "format": "csv"}}
}}"#,
            from_config
        ),
    )
    .unwrap();
    stdout(&cohphase(&[
        "squeeze", "--system", "barut-girardello", "--param", "kappa=2.5", "--lo", "0", "--hi", "3", "--count", "13",
        "--output", from_flags.to_str().unwrap(),
    ]));
    stdout(&cohphase(&["squeeze", "--config", config.to_str().unwrap()]));
    let (a, b) = (std::fs::read(from_flags).unwrap(), std::fs::read(from_config).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn dsl_config_matches_dsl_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"system": {"kind": "e", "expr": "n*(n+nu)", "params": {"nu": 5}}, "z_sweep": {"z": 1.2, "phase": 0.4}, "theta_grid": 101}"#,
    )
    .unwrap();
    let a = stdout(&cohphase(&["dist", "--config", config.to_str().unwrap()]));
    let b = stdout(&cohphase(&[
        "dist", "--system", "dsl", "--kind", "e", "--expr", "n*(n+nu)", "--param", "nu=5", "--z", "1.2", "--z-phase",
        "0.4", "--theta-grid", "101",
    ]));
    assert_eq!(a, b);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["squeeze", "--preset", "fig10"];
    let a = stdout(&cohphase(&args));
    let b = stdout(&cohphase(&args));
    let one = Command::new(env!("CARGO_BIN_EXE_cohphase"))
        .args(args)
        .env("COHPHASE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a, b);
    assert_eq!(a, stdout(&one));
    let bad = Command::new(env!("CARGO_BIN_EXE_cohphase"))
        .args(args)
        .env("COHPHASE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_tables_carry_the_system() {
    let out = stdout(&cohphase(&["squeeze", "--system", "hydrogen", "--lo", "0", "--hi", "0.5", "--count", "2", "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["system"], "hydrogen");
    assert_eq!(doc["columns"][4], "S_n");
    assert_eq!(doc["rows"][0][4], serde_json::Value::Null);
    assert_eq!(doc["rows"][1][0], 0.5);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_fails(&cohphase(&["dist", "--system", "morse", "--z", "1"]), 2, "UsageError");
    assert_fails(&cohphase(&["dist", "--system", "dsl", "--z", "1"]), 2, "UsageError");
    assert_fails(&cohphase(&["dist", "--system", "harmonic", "--param", "q", "--z", "1"]), 2, "UsageError");
    assert_fails(&cohphase(&["dist", "--system", "harmonic", "--param", "q=1", "--z", "1"]), 2, "InvalidArgument");
    assert_fails(&cohphase(&["dist", "--system", "penson-solomon", "--param", "q=2", "--z", "1"]), 2, "InvalidParameter");
    assert_fails(&cohphase(&["dist", "--system", "harmonic"]), 2, "no z given");
    assert_fails(
        &cohphase(&["dist", "--system", "dsl", "--kind", "f", "--expr", "sqrt(n", "--z", "1"]),
        2,
        "ParseError",
    );
    // clap's own usage errors share the code
    assert_eq!(cohphase(&["dist", "--bogus"]).status.code(), Some(2));
}

#[test]
fn truncation_cap_is_a_numerical_error() {
    let out = cohphase(&["dist", "--system", "hydrogen", "--z", "0.999", "--tail-tol", "1e-12", "--n-cap", "512"]);
    assert_fails(&out, 3, "NotConverged");
}

#[test]
fn non_half_integer_kappa_warns() {
    let out = cohphase(&["squeeze", "--system", "barut-girardello", "--param", "kappa=1.3", "--z", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: kappa = 1.3"));
}
