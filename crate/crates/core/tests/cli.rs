use std::process::{Command, Output};

use serde_json::Value;

fn kitepea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kitepea")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn strip_wall(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_ms");
            m.values_mut().for_each(strip_wall);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_wall),
        _ => {}
    }
}

#[test]
fn check_axioms_exit_zero() {
    let o = kitepea(&["check", "--shape", "n=2;lambda=id;rho=(0 1)", "--checks", "axioms", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["schema"], "kite-report/1");
    assert_eq!(v["status"], "holds");
    assert_eq!(v["checks"][0]["name"], "axioms");
}

#[test]
fn rdp0_on_strict_cone_fails_with_witness() {
    let o = kitepea(&["check", "--group", "StrictCone2", "--shape", "n=1;lambda=id;rho=id", "--height", "3", "--checks", "rdp0", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let w = v["checks"][0]["verdict"]["witness"].as_array().unwrap();
    let names: Vec<&str> = w.iter().map(|x| x["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["a", "b", "c"]);
}

#[test]
fn malformed_shape_is_a_config_error() {
    let o = kitepea(&["check", "--shape", "lambda=0,0;rho=id"]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("shape"));
    assert_eq!(code(&kitepea(&["check", "--group", "Q", "--shape", "n=1;lambda=id;rho=id"])), 64);
    assert_eq!(code(&kitepea(&["check", "--bogus"])), 64);
    assert_eq!(code(&kitepea(&["check"])), 64);
}

#[test]
fn config_file_and_flag_override() {
    let dir = std::env::temp_dir().join(format!("kitepea-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"group": "Z", "shape": {"lambda": [0, 1], "rho": [1, 0]}, "checks": ["symmetric"], "format": "json"}"#).unwrap();
    let o = kitepea(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let o = kitepea(&["check", "--config", cfg.to_str().unwrap(), "--checks", "commutative,axioms", "--height", "1"]);
    let v = json(&o);
    assert_eq!(v["config"]["height"], 1);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    let out = dir.join("report.json");
    let o = kitepea(&["check", "--config", cfg.to_str().unwrap(), "--checks", "axioms", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["status"], "holds");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"height\": 2,\n  \"colour\": 1\n}").unwrap();
    let o = kitepea(&["check", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 64);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("colour"), "{err}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn symmetry_sweep_matrix() {
    let o = kitepea(&["sweep", "--n", "0,1,2,3", "--checks", "symmetric", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 1 + 1 + 4 + 36);
    for c in cells {
        let holds = c["status"] == "holds";
        assert_eq!(holds, c["lambda"] == c["rho"], "{c}");
    }
}

#[test]
fn commutativity_sweep_matrix() {
    let o = kitepea(&["sweep", "--group", "Z", "--group", "TwistedLex(2,id,(0 1),Z)", "--n", "1,2", "--checks", "commutative", "--format", "json"]);
    let v = json(&o);
    for c in v["cells"].as_array().unwrap() {
        let want = c["group"] == "Z" && c["lambda"] == c["rho"];
        assert_eq!(c["status"] == "holds", want, "{c}");
    }
}

#[test]
fn sweep_edges() {
    let cfg = std::env::temp_dir().join(format!("kitepea-empty-{}.json", std::process::id()));
    std::fs::write(&cfg, r#"{"checks": ["symmetric"], "sweep": {"groups": ["Z"], "n": []}}"#).unwrap();
    let o = kitepea(&["sweep", "--config", cfg.to_str().unwrap()]);
    std::fs::remove_file(&cfg).ok();
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("cells 0"));
    let o = kitepea(&["sweep", "--n", "4", "--cell-budget", "100"]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cell budget"));
}

#[test]
fn show_tables() {
    let o = kitepea(&["show", "--shape", "", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["carrier"], serde_json::json!(["L()", "U()"]));
    assert_eq!(v["add"], serde_json::json!([[0, 1], [1, null]]));
    let o = kitepea(&["show", "--shape", "n=4;lambda=id;rho=(0 1)(2 3)", "--height", "1"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("cycles [[0,1],[2,3]]"), "{text}");
    let o = kitepea(&["show", "--shape", "n=1;lambda=id;rho=id"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("U(-2)"));
    let o = kitepea(&["show", "--shape", "n=4;lambda=id;rho=id", "--height", "3"]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("lower --height"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["check", "--shape", "n=2;lambda=(0 1);rho=id", "--checks", "all", "--format", "json"];
    let mut a = json(&kitepea(&args));
    let mut b = json(&kitepea(&args));
    strip_wall(&mut a);
    strip_wall(&mut b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
