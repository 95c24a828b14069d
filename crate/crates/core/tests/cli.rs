mod common;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn dvcs(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dvcs"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const EXAMPLE: &str = "examples/example1.toml";

fn golden(name: &str) -> String {
    std::fs::read_to_string(root().join("tests/golden").join(name)).unwrap()
}

#[test]
fn golden_outputs_match_byte_for_byte() {
    let cases: &[(&[&str], &str)] = &[
        (&["blend", EXAMPLE], "blend.txt"),
        (&["check", EXAMPLE], "check.txt"),
        (&["--json", "blend", EXAMPLE], "blend.json"),
        (&["check", "--json", EXAMPLE], "check.json"),
        (&["ctrb", EXAMPLE, "--blend"], "ctrb_blend.txt"),
    ];
    for (args, file) in cases {
        let (code, out, err) = dvcs(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert_eq!(out, golden(file), "{args:?} differs from {file}");
    }
}

#[test]
fn check_reports_the_witness() {
    let (code, out, _) = dvcs(&["check", EXAMPLE]);
    assert_eq!(code, 0);
    assert!(out.contains("witness: [0, 0, 1]\n"));
    let (code, out, _) = dvcs(&["--backend", "float", "check", EXAMPLE]);
    assert_eq!(code, 0);
    assert!(out.contains("witness: [0, 0, 1]\n"));
}

#[test]
fn malformed_corpus_exit_codes() {
    let expected: &[(&str, &str, i32)] = &[
        ("check", "missing_sigma2.toml", 2),
        ("check", "ragged_grid.toml", 2),
        ("check", "non_square.toml", 2),
        ("check", "bad_scalar.toml", 2),
        ("check", "b_rows_mismatch.toml", 2),
        ("check", "unknown_key.toml", 2),
        ("check", "not_toml.toml", 2),
        ("check", "no_transient.toml", 2),
        ("blend", "zero_alpha.toml", 2),
        ("blend", "no_transient.toml", 2),
        ("check", "b2_zero.toml", 1),
        ("ctrb", "b2_zero.toml", 0),
        ("simulate", "inverted_horizon.toml", 2),
        ("simulate", "b2_zero.toml", 2),
    ];
    for (cmd, file, want) in expected {
        let path = format!("tests/corpus/{file}");
        let mut args = vec![*cmd, path.as_str()];
        if *cmd == "simulate" {
            args.extend(["--out", "/dev/null"]);
        }
        let (code, out, err) = dvcs(&args);
        assert_eq!(code, *want, "{cmd} {file}\nstdout: {out}\nstderr: {err}");
        if *want == 2 {
            assert!(err.starts_with("error: "), "{cmd} {file}: {err}");
        }
    }
    let (_, out, _) = dvcs(&["check", "tests/corpus/b2_zero.toml"]);
    assert!(out.contains("realization condition not met"));
    let (_, _, err) = dvcs(&["check", "tests/corpus/bad_scalar.toml"]);
    assert!(err.contains("sigma1.A[1][2]"), "{err}");
}

#[test]
fn usage_errors() {
    assert_eq!(dvcs(&["frobnicate"]).0, 2);
    assert_eq!(dvcs(&["check"]).0, 2);
    assert_eq!(dvcs(&["check", "no/such/file.toml"]).0, 2);
    assert_eq!(dvcs(&["--tol", "-1", "reduce", "--vector", "1"]).0, 2);
    assert_eq!(dvcs(&["ctrb", EXAMPLE, "--system", "sigma3"]).0, 2);
    assert_eq!(dvcs(&["ctrb", EXAMPLE, "--system", "sigma1", "--blend"]).0, 2);
    assert_eq!(dvcs(&["--help"]).0, 0);
}

#[test]
fn reduce_examples() {
    for (input, want) in [
        ("1,1,2,2", "[1, 2] (×2)\n"),
        ("1,2,3", "[1, 2, 3] (×1)\n"),
        ("0,0,0,3/2,3/2,3/2", "[0, 3/2] (×3)\n"),
        ("-1,-1", "[-1] (×2)\n"),
    ] {
        let (code, out, err) = dvcs(&["reduce", "--vector", input]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out, want);
    }
    assert_eq!(dvcs(&["reduce", "--vector", "1,x"]).0, 2);
    assert_eq!(dvcs(&["reduce", "--vector", ""]).0, 2);
}

#[test]
fn ctrb_of_each_system() {
    let (code, out, _) = dvcs(&["ctrb", EXAMPLE, "--system", "sigma1"]);
    assert_eq!(code, 0);
    assert!(out.contains("rank = 2\n"));
    assert!(out.contains("basis: [0, 1], [1, 0]\n"));
    let (_, out, _) = dvcs(&["ctrb", EXAMPLE, "--system", "sigma2"]);
    assert!(out.contains("rank = 3\n"));
    let (_, out, _) = dvcs(&["ctrb", EXAMPLE, "--blend"]);
    assert!(out.contains("rank = 4\n"));
    assert!(out.contains("footnote [1] (3,2) = 9/4, printed 4/9\n"));
    assert!(out.contains("(5,6) = 3/128, printed 27/128"));
}

fn write_scenario(dir: &Path, y_target: &[f64], b1: &str, b2: &str) -> PathBuf {
    let ys: Vec<String> = y_target.iter().map(|v| format!("{v:e}")).collect();
    let text = format!(
        r#"name = "scenario"
[sigma1]
A = [["0", "1"], ["0", "0"]]
B = {b1}
[sigma2]
A = [["0", "0", "1"], ["0", "0", "0"], ["0", "1", "0"]]
B = {b2}
[transient]
alpha = "3/2"
beta = "1/2"
[scenario]
t0 = 0
te = 1
x_start = ["0", "1"]
y_target = [{}]
step = 0.001
quad_steps = 512
"#,
        ys.join(", ")
    );
    let path = dir.join("scenario.toml");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn simulate_steered_and_free() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("steered.csv");
    let (code, out, err) = dvcs(&["simulate", EXAMPLE, "--steer", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}{err}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,z1,z2,z3,z4,z5,z6\n"));
    assert_eq!(text.lines().count(), 1002);

    let free = dir.path().join("free.csv");
    let (code, out, _) = dvcs(&["simulate", EXAMPLE, "--out", free.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(free.exists());
    assert!(out.contains("target class missed"));

    // target taken from a forward run of the destination system
    let y = forward_destination_endpoint();
    let path = write_scenario(dir.path(), &y, r#"[["0"], ["1"]]"#, r#"[["0"], ["1"], ["0"]]"#);
    let (code, out, err) = dvcs(&["simulate", path.to_str().unwrap(), "--steer", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}{err}");
    let class_error: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("target_class_error = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(class_error <= 1e-5);
}

fn forward_destination_endpoint() -> Vec<f64> {
    use dvcs_core::numerics::FMatrix;
    use dvcs_core::simulation::{rk4_integrate, ControlSignal};
    let (_, s2) = common::example1();
    let times: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let values = times.iter().map(|t| vec![(2.0 * t).cos()]).collect();
    let u = ControlSignal::Tabulated { times, values, channels: 1 };
    let tr = rk4_integrate(
        &s2.a().to_f64(),
        &s2.b().to_f64(),
        &u,
        &FMatrix::column(vec![0.5, -1.0, 0.25]),
        0.0,
        1.0,
        1e-3,
    )
    .unwrap();
    tr.last_state().unwrap().as_slice().to_vec()
}

#[test]
fn unreachable_target_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // without actuation only the drift is reachable
    let path = write_scenario(dir.path(), &[0.0, 0.0, 5.0], r#"[["0"], ["0"]]"#, r#"[["0"], ["0"], ["0"]]"#);
    let csv = dir.path().join("never.csv");
    let (code, out, err) = dvcs(&["simulate", path.to_str().unwrap(), "--steer", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}{err}");
    assert!(out.contains("target not reachable: residual"));
    assert!(!csv.exists());
}

#[test]
fn simulate_rejects_short_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(root().join(EXAMPLE)).unwrap().replace("te = 1", "te = 0.005");
    let path = dir.path().join("short.toml");
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = dvcs(&["simulate", path.to_str().unwrap(), "--out", "/dev/null"]);
    assert_eq!(code, 2);
    assert!(err.contains("shorter than ten integration steps"), "{err}");
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        vec!["check", EXAMPLE],
        vec!["ctrb", EXAMPLE, "--blend", "--json"],
        vec!["--backend", "float", "blend", EXAMPLE],
    ] {
        assert_eq!(dvcs(&args), dvcs(&args), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    dvcs(&["simulate", EXAMPLE, "--steer", "--out", a.to_str().unwrap()]);
    dvcs(&["simulate", EXAMPLE, "--steer", "--out", b.to_str().unwrap()]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

/// Every number in the JSON document, rendered as text.
fn json_numbers(v: &Value, acc: &mut BTreeSet<String>) {
    match v {
        Value::Number(n) => {
            acc.insert(n.to_string());
            if let Some(f) = n.as_f64() {
                acc.insert(format!("{f:e}"));
            }
        }
        Value::Object(map) => {
            if let (Some(Value::Number(num)), Some(Value::Number(den))) = (map.get("num"), map.get("den")) {
                if den.as_i64() == Some(1) {
                    acc.insert(num.to_string());
                } else {
                    acc.insert(format!("{num}/{den}"));
                }
            }
            map.values().for_each(|x| json_numbers(x, acc));
        }
        Value::Array(items) => items.iter().for_each(|x| json_numbers(x, acc)),
        Value::String(s) => {
            acc.insert(s.clone());
        }
        _ => {}
    }
}

/// Numeric tokens of the human report, skipping digits glued to words such
/// as `sigma1` or `C2`.
fn text_numbers(text: &str) -> Vec<String> {
    text.split(|c: char| c.is_whitespace() || ",[]()=:;".contains(c))
        .filter(|tok| !tok.is_empty())
        .filter(|tok| tok.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '-'))
        .filter(|tok| tok.parse::<f64>().is_ok() || tok.split('/').all(|p| p.parse::<i64>().is_ok()))
        .map(str::to_string)
        .collect()
}

#[test]
fn json_carries_every_reported_number() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let csv = csv.to_str().unwrap();
    for args in [
        vec!["check", EXAMPLE],
        vec!["blend", EXAMPLE],
        vec!["ctrb", EXAMPLE, "--blend"],
        vec!["ctrb", EXAMPLE, "--system", "sigma2"],
        vec!["reduce", "--vector", "0,0,0,3/2,3/2,3/2"],
        vec!["simulate", EXAMPLE, "--steer", "--out", csv],
    ] {
        let (_, text, _) = dvcs(&args);
        let mut json_args = args.clone();
        json_args.push("--json");
        let (_, doc, _) = dvcs(&json_args);
        let parsed: Value = serde_json::from_str(&doc).unwrap();
        let mut known = BTreeSet::new();
        json_numbers(&parsed, &mut known);
        for tok in text_numbers(&text) {
            // structural counts (dimensions, footnote markers, sample counts)
            // appear in JSON as plain integers as well
            assert!(known.contains(&tok) || tok.parse::<f64>().is_ok_and(|x| x.fract() == 0.0 && x.abs() < 1e4),
                "{args:?}: {tok} missing from JSON");
        }
    }
}
