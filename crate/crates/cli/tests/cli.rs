use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("maxmin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxmin")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn optimal_symmetric() {
    let inst = scratch("sym.json", r#"{"vmax": 1, "means": [0.64, 0.64]}"#);
    let v = json(&run(&["optimal", inst.to_str().unwrap()]));
    assert!((num(&v["guarantee"]) - 0.32).abs() < 1e-9);
    for r in v["reserves"].as_array().unwrap() {
        assert!((num(r) - 0.4).abs() < 1e-9);
    }
}

#[test]
fn evaluate_second_price_auction() {
    let inst = scratch("spa_inst.json", r#"{"vmax": [1, 1], "means": [0.6, 0.7]}"#);
    let mech = scratch("spa.json", r#"{"type": "corner_hitting", "reserves": [0, 0]}"#);
    let v = json(&run(&["evaluate", inst.to_str().unwrap(), mech.to_str().unwrap()]));
    assert!((num(&v["guarantee"]) - 0.3).abs() < 1e-9);
}

#[test]
fn worst_case_type_two() {
    let inst = scratch("wc.json", r#"{"vmax": 1, "means": [0.7, 0.6]}"#);
    let v = json(&run(&["worst-case", inst.to_str().unwrap(), "--reserves", "0.45,0.5"]));
    assert_eq!(v["type"], "II");
    let probs: Vec<f64> = v["probs"].as_array().unwrap().iter().map(num).collect();
    for (p, want) in probs.iter().zip([0.19 / 0.55, 0.25 / 0.55, 0.2]) {
        assert!((p - want).abs() < 1e-9, "{probs:?}");
    }
}

#[test]
fn optimal_output_evaluates_to_its_guarantee() {
    for (name, body) in [
        ("rt_sym.json", r#"{"vmax": 1, "means": [0.3, 0.5, 0.8]}"#),
        ("rt_asym.json", r#"{"vmax": [1, 0.8], "means": [0.6, 0.5]}"#),
    ] {
        let inst = scratch(name, body);
        let opt = run(&["optimal", inst.to_str().unwrap()]);
        let expected = num(&json(&opt)["guarantee"]);
        let mech = scratch(&format!("mech_{name}"), std::str::from_utf8(&opt.stdout).unwrap());
        let v = json(&run(&["evaluate", inst.to_str().unwrap(), mech.to_str().unwrap()]));
        assert!((num(&v["guarantee"]) - expected).abs() < 1e-7, "{name}");
    }
}

#[test]
fn improve_and_member_on_a_grid_mechanism() {
    let inst = scratch("imp.json", r#"{"vmax": 1, "means": [0.64, 0.64]}"#);
    let mech = scratch(
        "grid.json",
        r#"{"type": "grid", "coords": [[0, 0.3, 1], [0, 0.3, 1]],
            "thresholds": [[0.3, 0.3, 1], [0.3, 0.3, 1]]}"#,
    );
    let (i, m) = (inst.to_str().unwrap(), mech.to_str().unwrap());
    // Second-price auction with reserve 0.3, tabulated.
    let before = num(&json(&run(&["evaluate", i, m]))["guarantee"]);
    assert!(before < 0.32 - 1e-4);
    let v = json(&run(&["improve", i, m]));
    assert!(num(&v["audit"]["output_guarantee"]) >= before - 1e-9);
    let mem = json(&run(&["member", i, m]));
    assert_eq!(mem["member"], false);
}

#[test]
fn output_is_deterministic() {
    let inst = scratch("det.json", r#"{"vmax": 1, "means": [0.75, 0.91]}"#);
    let a = run(&["optimal", inst.to_str().unwrap()]);
    let b = run(&["optimal", inst.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn plot_data_is_csv_with_header() {
    let inst = scratch("plot.json", r#"{"vmax": 1, "means": [0.7, 0.6]}"#);
    for fig in ["regimes", "reserve-set", "wc-types"] {
        let out = run(&["plot-data", inst.to_str().unwrap(), "--figure", fig]);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.lines();
        let width = lines.next().unwrap().split(',').count();
        assert!(lines.all(|l| l.split(',').count() == width), "{fig}");
    }
}

#[test]
fn exit_codes() {
    let missing = run(&["optimal", "/nonexistent/instance.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let garbled = scratch("garbled.json", "{not json");
    assert_eq!(run(&["optimal", garbled.to_str().unwrap()]).status.code(), Some(2));

    let bad = scratch("bad.json", r#"{"vmax": 1, "means": [1.2, 0.5]}"#);
    let out = run(&["optimal", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "invalid_instance");
    assert!(err["error"]["message"].is_string());

    let three = scratch("three.json", r#"{"vmax": 1, "means": [0.5, 0.5, 0.5]}"#);
    let out = run(&["worst-case", three.to_str().unwrap(), "--reserves", "0.1,0.1,0.1"]);
    assert_eq!(out.status.code(), Some(1));
}
