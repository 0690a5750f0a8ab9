use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hyperop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperop"))
        .args(args)
        .env_remove("HYPEROP_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("hyperop-cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn orbit_example_csv() {
    let o = hyperop(&["orbit", "--op", "T", "--lambda", "0.5", "--b", "0", "--poly", "z^3", "--n", "4", "--radius", "1"]);
    assert_eq!(code(&o), 0);
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rd.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(header, ["n", "norm_upper", "norm_boundary", "envelope", "pass"]);
    let norms: Vec<f64> = rd.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(norms, [1.0, 0.75, 0.75, 0.75, 0.0]);
    let manifest: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(manifest["command"]["subcommand"], "orbit");
    assert_eq!(manifest["command"]["op"]["lambda"], "0.5");
}

#[test]
fn apply_derivative_of_constant() {
    let o = hyperop(&["apply", "--op", "D", "--poly", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["report"]["output"]["coeffs"], serde_json::json!([]));
    assert_eq!(v["report"]["text"], "0");
    assert_eq!(v["manifest"]["backend"], "exact");
}

#[test]
fn verify_identities_example() {
    let o = hyperop(&[
        "verify-identities", "--lambda", "2", "--b", "1", "--deg-max", "8", "--n-max", "12", "--backend", "exact",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let families = v["report"]["families"].as_array().unwrap();
    assert_eq!(families.len(), 8);
    assert!(families.iter().all(|f| f["failures"] == 0 && f["checks"].as_u64().unwrap() > 0));
}

#[test]
fn exit_codes() {
    // parse error
    assert_eq!(code(&hyperop(&["apply", "--poly", "z^2 +"])), 2);
    // malformed JSON
    assert_eq!(code(&hyperop(&["apply", "--poly", "z", "--op-json", "{kind"])), 2);
    // float JSON into the exact backend
    let mismatch = hyperop(&["apply", "--poly-json", r#"{"coeffs":[{"re":1.5,"im":0}]}"#]);
    assert_eq!(code(&mismatch), 2);
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("backend mismatch"));
    // unknown flag
    assert_eq!(code(&hyperop(&["orbit", "--poly", "z", "--nope"])), 2);
    // |λ| < 1: budget exhausted, inconclusive
    assert_eq!(code(&hyperop(&["criterion", "--lambda", "1/2", "--b", "0", "--deg-max", "2", "--n-max", "20"])), 3);
    // |λ| ≥ 1 but too few indices to certify: verified failure
    assert_eq!(code(&hyperop(&["criterion", "--lambda", "2", "--b", "1", "--n-max", "3", "--radius", "2"])), 1);
    assert_eq!(code(&hyperop(&["criterion", "--lambda", "2", "--b", "1", "--radius", "2", "--eps", "1e-4"])), 0);
    // C has no right-inverse family
    assert_eq!(code(&hyperop(&["inverse", "--op", "C", "--poly", "z"])), 2);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "verify-identities", "--lambda", "1+i", "--b", "i", "--deg-max", "4", "--n-max", "3", "--samples", "3",
        "--seed", "7", "--backend", "float",
    ];
    let a = hyperop(&args);
    let b = hyperop(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["manifest"]["seed"], 7);
}

#[test]
fn grid_cells_merge_in_order() {
    let args = ["orbit", "--poly", "z^3", "--n", "3", "--grid", "lambda=2,1/2", "--grid", "b=0,1"];
    let o = hyperop(&args);
    assert_eq!(code(&o), 0);
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rd.headers().unwrap().iter().take(2).collect::<Vec<_>>(), ["lambda", "b"]);
    let rows: Vec<(String, String, String)> = rd
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_owned(), r[1].to_owned(), r[3].to_owned())
        })
        .collect();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[0], ("2".into(), "0".into(), "1".into()));
    assert_eq!(rows[5], ("2".into(), "1".into(), "27".into()));
    assert_eq!(rows[9], ("1/2".into(), "0".into(), "0.75".into()));
    assert_eq!(o.stdout, hyperop(&args).stdout);

    let j = hyperop(&["orbit", "--poly", "z^3", "--n", "3", "--grid", "lambda=2,1/2", "--format", "json"]);
    let v = json(&j);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    assert_eq!(cells[1]["params"]["lambda"], "1/2");
    assert_eq!(cells[1]["command"]["op"]["lambda"], "1/2");
    assert_eq!(v["manifest"]["grid"][0]["values"], serde_json::json!(["2", "1/2"]));
}

#[test]
fn grid_reports_invalid_cells() {
    let o = hyperop(&["apply", "--poly", "z", "--grid", "lambda=2,zz"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["cells"][0]["verdict"], "pass");
    assert!(v["cells"][1]["error"].as_str().unwrap().contains("--lambda"));
}

#[test]
fn output_file_with_manifest_sidecar() {
    let path = scratch("decay.csv");
    let p = path.to_str().unwrap();
    let o = hyperop(&["decay", "--exp-order", "40", "--format", "csv", "--output", p]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 31);
    assert!(rows[5][3].parse::<f64>().unwrap() > 0.0);
    assert!(rows[5..].iter().all(|r| &r[4] == "true"));
    let side: Value = serde_json::from_str(&std::fs::read_to_string(format!("{p}.manifest.json")).unwrap()).unwrap();
    assert_eq!(side["command"]["exp_order"], 40);
    assert_eq!(side["output"], p);
}

#[test]
fn json_inputs_from_files() {
    let op = scratch("op.json");
    std::fs::write(&op, r#"{"kind": "psiT", "lambda": {"re": "2", "im": "0"}, "b": {"re": "1", "im": "0"},
        "psi": {"coeffs": [{"re": "0", "im": "0"}, {"re": "1", "im": "0"}, {"re": "1", "im": "0"}]}}"#)
        .unwrap();
    let arg = format!("@{}", op.display());
    let o = hyperop(&["inverse", "--op-json", &arg, "--poly", "1 + z^2", "--n", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["report"]["kind"], "psiT");
    assert_eq!(v["report"]["round_trip"], true);
}

#[test]
fn inverse_kinds() {
    let smn = json(&hyperop(&["inverse", "--kind", "smn", "--m", "1", "--n", "1", "--lambda", "2", "--b", "1", "--poly", "z"]));
    assert_eq!(smn["report"]["round_trip"], true);
    let e = json(&hyperop(&["inverse", "--kind", "expansion", "--psi", "1+z", "--m", "2", "--n", "3"]));
    let a = e["report"]["expansion"]["a"].as_array().unwrap();
    assert_eq!(a[1], serde_json::json!([2, 3, {"re": "6", "im": "0"}]));
    assert_eq!(e["report"]["expansion"]["bound"], 36.0);
    for (kind, psi) in [("fn", "z"), ("psit", "z+z^2"), ("spsi", "1+z")] {
        let o = hyperop(&[
            "inverse", "--kind", kind, "--phi", "z^2+z^3", "--psi", psi, "--op", "D", "--lambda", "3/2", "--b", "i",
            "--n", "2", "--poly", "z^4 - 2*z", "--backend", "float",
        ]);
        assert_eq!(code(&o), 0, "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&o)["report"]["round_trip"], true);
    }
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_hyperop"))
        .args(["apply", "--poly", "z", "--backend", "float"])
        .env("HYPEROP_PRECISION", "128")
        .output()
        .unwrap();
    assert_eq!(json(&o)["manifest"]["precision"], 128);
    assert_eq!(code(&hyperop(&["apply", "--poly", "z", "--backend", "float", "--precision", "1"])), 2);
}

#[test]
fn synthesize_and_bounds() {
    let s = json(&hyperop(&["synthesize", "--lambda", "2", "--b", "1", "--radius", "2", "--eps", "1e-3"]));
    assert_eq!(s["verdict"], "pass");
    assert_eq!(s["report"]["plan"]["exact_visits"], true);
    let b = hyperop(&["bounds", "--psi", "1+z+z^2", "--d", "2", "--n-min", "2", "--n-max", "2"]);
    assert_eq!(code(&b), 0);
    assert_eq!(json(&b)["report"]["bounds"]["rows"][0]["xi_c"][0], 2.0);
    assert_eq!(code(&hyperop(&["bounds", "--psi", "1+z", "--format", "csv"])), 2);
}
