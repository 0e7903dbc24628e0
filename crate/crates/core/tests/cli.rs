use std::process::{Command, Output};

fn apolar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apolar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn ann_by_params() {
    let o = apolar(&["ann", "--params", "1,1,1,1,1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("case: OTHER"), "{s}");
    assert!(s.contains("minimal generators (5)"), "{s}");
    assert!(s.contains("complete intersection: false"), "{s}");
    assert!(s.contains("formula agrees: pass"), "{s}");
}

#[test]
fn ann_by_dual_text() {
    let s = stdout(&apolar(&["ann", "--dual", "x^3*y*z - x*y^3*t"]));
    assert!(s.contains("h-vector: (1,4,7,7,4,1)"), "{s}");
    let s = stdout(&apolar(&["ann", "--dual", "x^2", "--json"]));
    let v: serde_json::Value = serde_json::from_str(s.trim()).unwrap();
    let gens: Vec<&str> = v["generators"].as_array().unwrap().iter().map(|g| g["poly"].as_str().unwrap()).collect();
    assert_eq!(gens, ["y", "z", "x^3"]);
    assert_eq!(v["complete_intersection"], true);
}

#[test]
fn ann_rejects_bad_input() {
    let o = apolar(&["ann", "--dual", "x + * y"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    let o = apolar(&["ann", "--dual", "x^2 + y"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lefschetz_exit_codes() {
    let o = apolar(&["lefschetz", "--dual", "x^3*y*z - x*y^3*t", "--method", "both"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("HessianVanishes"));
    let o = apolar(&["lefschetz", "--params", "3,3,2,1,1", "--property", "slp"]);
    assert_eq!(o.status.code(), Some(0));
    let o = apolar(&["lefschetz", "--dual", "x^2*y^2*z^2", "--property", "slp"]);
    assert_eq!(o.status.code(), Some(0));
    // without certificates a failing map stays undecided
    let o = apolar(&["lefschetz", "--dual", "x^3*y*z - x*y^3*t", "--method", "rank"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sweep_json_lines() {
    let o = apolar(&["sweep", "--max-abc", "1", "--max-em", "1", "--checks", "gb"]);
    assert!(o.status.success());
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    for v in &lines {
        for key in ["id", "params", "case", "checks", "ms"] {
            assert!(v.get(key).is_some(), "{v}");
        }
        let checks = v["checks"].as_object().unwrap();
        assert_eq!(checks.keys().collect::<Vec<_>>(), ["gb"]);
    }
}

#[test]
fn sweep_surfaces_corruption() {
    let o = apolar(&["sweep", "--max-abc", "1", "--max-em", "1", "--checks", "ann", "--corrupt", "1,1,1,1,1"]);
    assert_eq!(o.status.code(), Some(1));
    let bad: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["checks"]["ann"]["status"] == "fail")
        .collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["id"], "1,1,1,1,1");
    assert!(bad[0]["checks"]["ann"]["detail"].as_str().unwrap().contains("degree 4"));
}

#[test]
fn sweep_is_deterministic() {
    let run = || {
        let o = apolar(&["sweep", "--max-abc", "1", "--max-em", "1", "--checks", "slp,betti", "--jobs", "2"]);
        stdout(&o)
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v["ms"] = 0.into();
                v
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn codimn_range() {
    let o = apolar(&["codimn", "--from", "3", "--to", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let o = apolar(&["codimn", "--from", "4", "--to", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|v| v["wlp"] == "fail"));
    let o = apolar(&["codimn", "--from", "4", "--to", "7"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn doubling_and_gb() {
    let o = apolar(&["doubling", "--params", "1,1,1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("validates: true"));
    let o = apolar(&["gb", "x+y", "x", "--order", "lex:1,0", "--nvars", "2"]);
    assert!(stdout(&o).contains("input is a Groebner basis: true"));
    let o = apolar(&["gb", "x+y", "x", "--order", "lex:0,1", "--nvars", "2"]);
    assert!(stdout(&o).contains("input is a Groebner basis: false"));
    let o = apolar(&["gb", "--params", "1,1,1,1,1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["input_is_groebner"], true);
    assert_eq!(v["initial_ideal"].as_array().unwrap().len(), 5);
}
