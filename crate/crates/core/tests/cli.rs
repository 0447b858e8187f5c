use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crystal-paths"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn graph_d2_has_six_elements() {
    let out = run(&["graph", "D2", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let n = v["elements"].as_array().or(v["labels"].as_array()).expect("element list").len();
    assert_eq!(n, 6);
}

#[test]
fn graph_dot_lists_arrows() {
    let out = run(&["graph", "A1", "1", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("digraph"));
    assert!(s.contains("->"));
}

#[test]
fn kostka_prints_polynomial() {
    let out = run(&["kostka", "--xi", "2,1", "--l", "1", "--j", "3", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("q^2"));
}

#[test]
fn bad_configuration_exits_2() {
    assert_eq!(run(&["graph", "A1", "0"]).status.code(), Some(2));
    assert_eq!(run(&["graph", "E8", "1"]).status.code(), Some(2));
    assert_eq!(run(&["kostka", "--xi", "1,2", "--l", "1", "--j", "3", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn weyl_guard_exits_4() {
    let out = run(&[
        "--max-weyl-length", "0", "onedsum", "x", "--type", "A1", "--rank", "1", "--b", "1", "--j", "3", "--xi", "1,0",
        "--eta", "1,0", "--method", "weyl",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_formulas_passes() {
    let out = run(&["verify", "formulas", "--type", "B1", "--rank", "3", "--jmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out).is_object());
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("crystal-paths-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.json");
    let p = path.to_str().unwrap();
    let out = run(&["--out", p, "onedsum", "g", "--type", "A1", "--rank", "1", "--b", "0", "--j", "2", "--mu", "0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = run(&["onedsum", "g", "--type", "A1", "--rank", "1", "--b", "0", "--j", "2", "--mu", "0,0"]).stdout;
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic_across_threads() {
    let args = ["stringfn", "--type", "A1", "--rank", "2", "--lambda", "L0", "--M", "3"];
    let a = run(&[&args[..], &["--threads", "1"]].concat());
    let b = run(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
