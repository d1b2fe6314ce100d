use std::process::{Command, Output};

use stringnet::fusion_data::builtin_category;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stringnet")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn verify_builtins() {
    let out = run(&["verify", "--category", "fibonacci"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["groupoid_dim"], 13);
    assert_eq!(v["blocks"], serde_json::json!([2, 3]));
    assert_eq!(run(&["verify", "--category", "vec_z2"]).status.code(), Some(0));
}

#[test]
fn verify_perturbed_category_fails() {
    let mut cat = builtin_category("fibonacci").unwrap();
    let f = cat.f(1, 1, 1, 1, 1, 1);
    cat.set_f(1, 1, 1, 1, 1, 1, f + 0.01);
    let path = std::env::temp_dir().join(format!("stringnet-bad-{}.json", std::process::id()));
    std::fs::write(&path, cat.to_json()).unwrap();
    let out = run(&["verify", "--category", path.to_str().unwrap(), "--format", "text"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[FAIL] F pentagon"), "{text}");
}

#[test]
fn gsd_commands() {
    let out = run(&["gsd", "--model", "levinwen", "--category", "fibonacci", "--lattice", "k4_torus"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["gsd"], 4);
    let out = run(&["gsd", "--model", "kitaev", "--category", "vec_z2", "--lattice", "theta_sphere"]);
    assert_eq!(json(&out)["gsd"], 1);
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["gsd", "--lattice", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--category", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(&["gsd", "--tol", "0"]).status.code(), Some(2));
    let path = std::env::temp_dir().join(format!("stringnet-torus1-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"vertices":[[0,2,4],[1,3,5]],"edges":[[0,1],[2,3],[4,5]]}"#).unwrap();
    let code = run(&["gsd", "--model", "levinwen", "--lattice", path.to_str().unwrap()]).status.code();
    std::fs::remove_file(&path).ok();
    assert_eq!(code, Some(2));
}

#[test]
fn compare_and_determinism() {
    let args = ["compare", "--category", "fibonacci", "--lattice", "theta_sphere", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["pass"], true);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("stringnet-out-{}.txt", std::process::id()));
    let out = run(&["gsd", "--model", "levinwen", "--category", "vec_z2", "--format", "text", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.contains("gsd 1"));
}
