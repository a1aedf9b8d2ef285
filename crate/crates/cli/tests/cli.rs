use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Workspace {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, src: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, src).unwrap();
        p
    }
}

fn zeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeta"))
        .args(args)
        .env_remove("ZETA_WIRE_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn check_reports_type_and_contractions() {
    let ws = Workspace::new();
    let f = ws.file("share.zeta", "Z x:1. <x,x>");
    let o = zeta(&["check", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("1 -> 1 * 1\n"), "{out}");
    assert!(out.contains("C-nodes: {x: arity 2, basis Z}"), "{out}");

    let unit = ws.file("unit.zeta", "*");
    let o = zeta(&["check", unit.to_str().unwrap()]);
    assert_eq!(stdout(&o).lines().next(), Some("0"));
}

#[test]
fn check_exit_codes() {
    let ws = Workspace::new();
    let unbound = ws.file("bad.zeta", "<x, y>");
    let o = zeta(&["check", unbound.to_str().unwrap(), "--ctx", "x:Z:1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unbound variable y"));

    let garbage = ws.file("garbage.zeta", "Z x:1. <x,");
    assert_eq!(code(&zeta(&["check", garbage.to_str().unwrap()])), 2);
    let fine = ws.file("fine.zeta", "x");
    assert_eq!(code(&zeta(&["check", fine.to_str().unwrap(), "--ctx", "x:Q:1"])), 2);
}

#[test]
fn json_output_for_check_and_errors() {
    let ws = Workspace::new();
    let f = ws.file("share.zeta", "Z x:1. <x,x>");
    let o = zeta(&["--json", "check", f.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["type"], "1 -> 1 * 1");
    assert_eq!(v["contractions"]["x"][0]["arity"], 2);
    assert_eq!(v["contractions"]["x"][0]["basis"], "Z");

    let bad = ws.file("bad.zeta", "y");
    let o = zeta(&["check", bad.to_str().unwrap(), "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"]["exit_code"], 1);
}

fn spiders(v: &Value, out: &mut Vec<(String, u64, u64)>) {
    match v {
        Value::Object(m) => {
            if m.get("kind").and_then(Value::as_str) == Some("spider") {
                out.push((
                    m["basis"].as_str().unwrap().to_string(),
                    m["in"].as_u64().unwrap(),
                    m["out"].as_u64().unwrap(),
                ));
            }
            m.values().for_each(|c| spiders(c, out));
        }
        Value::Array(a) => a.iter().for_each(|c| spiders(c, out)),
        _ => {}
    }
}

#[test]
fn diagram_formats() {
    let ws = Workspace::new();
    let f = ws.file("share.zeta", "Z x:1. <x,x>");
    let o = zeta(&["diagram", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut found = Vec::new();
    spiders(&v["diagram"], &mut found);
    let copies: Vec<_> = found.iter().filter(|(_, _, out)| *out == 2).collect();
    assert_eq!(copies.len(), 1);
    assert_eq!(copies[0].0, "Z");
    let back = zeta_core::diagram::from_json(&v["diagram"].to_string()).unwrap();
    assert_eq!(back.arity().unwrap().outputs, 3);

    let o = zeta(&["diagram", f.to_str().unwrap(), "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph"));
}

#[test]
fn higher_order_diagram_copies_three_wires_in_x() {
    let ws = Workspace::new();
    let f = ws.file("ho.zeta", "(X f. <f, f>) (Z x:1. <x, x>)");
    let v: Value = serde_json::from_slice(&zeta(&["diagram", f.to_str().unwrap()]).stdout).unwrap();
    let mut found = Vec::new();
    spiders(&v["diagram"], &mut found);
    let x_copies = found.iter().filter(|(b, i, o)| b == "X" && *i == 1 && *o == 2).count();
    assert_eq!(x_copies, 3, "{found:?}");
}

#[test]
fn eval_prints_the_matrix_json() {
    let ws = Workspace::new();
    let f = ws.file("share.zeta", "Z x:1. <x,x>");
    let o = zeta(&["eval", f.to_str().unwrap(), "--as-map"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["shape"], serde_json::json!([4, 2]));
    let entries = v["entries"].as_array().unwrap();
    let re: Vec<f64> = entries.iter().map(|e| e[0].as_f64().unwrap()).collect();
    let c = re[0];
    assert!(c.abs() > 1e-9);
    for (k, want) in [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0].iter().enumerate() {
        assert!((re[k] - c * want).abs() < 1e-9);
    }

    // Byte-for-byte the library's serialization.
    let jd = zeta_core::semantics::judgement(
        &zeta_core::types::Context::empty(),
        &zeta_core::syntax::parse("Z x:1. <x,x>").unwrap(),
        &Default::default(),
    )
    .unwrap();
    let m = zeta_core::eval::denote(&zeta_core::semantics::eval_as_map(&jd).unwrap().diagram).unwrap();
    assert_eq!(stdout(&o), m.to_json() + "\n");
}

#[test]
fn eval_respects_the_wire_budget() {
    let ws = Workspace::new();
    let f = ws.file("big.zeta", "Z[15]");
    assert_eq!(code(&zeta(&["eval", f.to_str().unwrap()])), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_zeta"))
        .args(["eval", f.to_str().unwrap(), "--format", "text"])
        .env("ZETA_WIRE_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let small = ws.file("small.zeta", "Z[2]");
    let o = Command::new(env!("CARGO_BIN_EXE_zeta"))
        .args(["eval", small.to_str().unwrap(), "--format", "text"])
        .env("ZETA_WIRE_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn equiv_verdicts() {
    let ws = Workspace::new();
    let z = ws.file("z.zeta", "Z x. x");
    let lam = ws.file("lam.zeta", "\\x. x");
    let o = zeta(&["equiv", z.to_str().unwrap(), lam.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "EQUIVALENT (scalar 1+0i)");

    let hh = ws.file("hh.zeta", "\\x. H (H x)");
    let o = zeta(&["equiv", hh.to_str().unwrap(), lam.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(zeta(&["equiv", hh.to_str().unwrap(), lam.to_str().unwrap(), "--exact"])
        .status
        .code()
        .is_some_and(|c| c == 1));

    let s0 = ws.file("s0.zeta", "Z[1]^0");
    let s1 = ws.file("s1.zeta", "Z[1]^pi");
    let o = zeta(&["equiv", s0.to_str().unwrap(), s1.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("DISTINCT"));

    let pair = ws.file("pair.zeta", "Z[2]");
    assert_eq!(code(&zeta(&["equiv", s0.to_str().unwrap(), pair.to_str().unwrap()])), 2);
}

#[test]
fn rules_suite_passes() {
    let o = zeta(&["rules", "--tol", "1e-9", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failing"], 0);
    assert!(v["instances"].as_u64().unwrap() > 100);
}

#[test]
fn share_check_answers_per_copy_count() {
    let ws = Workspace::new();
    let xpi = ws.file("xpi.zeta", "X[1]^pi");
    let o = zeta(&["share-check", xpi.to_str().unwrap(), "--basis", "Z", "--copies", "2..3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "commutes: yes, yes");

    let zh = ws.file("zh.zeta", "Z[1]^pi/2");
    let o = zeta(&["share-check", zh.to_str().unwrap(), "--copies", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "commutes: no");
}

#[test]
fn bad_flags_are_rejected() {
    let ws = Workspace::new();
    let f = ws.file("s.zeta", "Z[1]");
    assert_ne!(code(&zeta(&["equiv", f.to_str().unwrap(), f.to_str().unwrap(), "--tol", "0"])), 0);
    assert_ne!(code(&zeta(&["share-check", f.to_str().unwrap(), "--basis", "Y"])), 0);
}
