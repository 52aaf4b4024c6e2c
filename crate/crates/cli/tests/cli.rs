use std::io::Write;
use std::process::{Command, Output, Stdio};

const K4: &str = r#"{"vertices":["a","b","c","d"],"edges":[["a","b"],["a","c"],["a","d"],["b","c"],["b","d"],["c","d"]],"preserved":[],"fixed":[]}"#;
const FIVE_POINTS: &str = r#"{"vertices":["a","b","c","d","e"],"edges":[],"preserved":[],"fixed":[]}"#;
const P3: &str = r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"]]}"#;

fn rorg(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rorg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn rorg");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn vcd_of_k4() {
    let v = json(&rorg(&["vcd", "--aut"], K4));
    assert_eq!(v["vcd"], 6);
    assert_eq!(v["aut_vcd"], 6);
    let sum: u64 = v["leaves"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["vcd"].as_u64().unwrap())
        .sum();
    assert_eq!(sum, 6);
}

#[test]
fn vcd_of_five_points() {
    let v = json(&rorg(&["vcd"], FIVE_POINTS));
    assert_eq!(v["vcd"], 7);
    assert!(v.get("aut_vcd").is_none());
    assert!(v["diagnostics"]["measure_trace"].is_array());
}

#[test]
fn p3_dot_has_two_internal_nodes_and_three_leaves() {
    let out = rorg(&["tree", "--format", "dot"], P3);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("shape=ellipse").count(), 2);
    assert_eq!(dot.matches("shape=box").count(), 3);
}

#[test]
fn tree_json_records_case_and_delta() {
    let v = json(&rorg(&["tree"], P3));
    assert_eq!(v["case"], "1");
    assert_eq!(v["delta"], serde_json::json!(["b"]));
    assert_eq!(v["kernel"]["case"], "2d");
}

#[test]
fn output_is_byte_deterministic() {
    for args in [
        &["vcd"][..],
        &["tree", "--format", "dot"],
        &["tree"],
        &["witness"],
        &["vcd", "--choice-seed", "17"],
    ] {
        for input in [K4, FIVE_POINTS, P3] {
            let a = rorg(args, input);
            let b = rorg(args, input);
            assert!(a.status.success());
            assert_eq!(a.stdout, b.stdout, "{args:?}");
        }
    }
}

#[test]
fn choice_seed_never_changes_vcd() {
    let inputs = [
        P3,
        r#"{"vertices":["a","b","c","d","e"],"edges":[["a","b"],["b","c"],["c","d"],["d","e"]]}"#,
        r#"{"vertices":["a","b","c","d"],"edges":[["a","b"],["c","d"]],"preserved":[["a","c"]],"fixed":[["b"]]}"#,
    ];
    for input in inputs {
        let base = json(&rorg(&["vcd"], input))["vcd"].clone();
        for seed in ["1", "2", "99", "123456789"] {
            assert_eq!(json(&rorg(&["vcd", "--choice-seed", seed], input))["vcd"], base);
        }
    }
}

#[test]
fn invalid_inputs_exit_with_two() {
    let bad = [
        r#"{"vertices":["a"],"edges":[["a","a"]]}"#,
        r#"{"vertices":["a","b"],"preserved":[["a","z"]]}"#,
        r#"{"vertices":["a","a"]}"#,
        "{not json",
    ];
    for input in bad {
        let out = rorg(&["vcd"], input);
        assert_eq!(out.status.code(), Some(2), "{input}");
        assert!(out.stdout.is_empty());
    }
    let out = rorg(&["vcd"], r#"{"vertices":["a","a"],"edges":[["a","b"]]}"#);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("duplicate vertex") && err.contains("unknown vertex"));
}

#[test]
fn aut_is_rejected_with_collections() {
    let out = rorg(&["vcd", "--aut"], r#"{"vertices":["a","b"],"preserved":[["a"]]}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn vertex_cap_is_enforced() {
    let out = rorg(&["vcd", "--max-vertices", "4"], FIVE_POINTS);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reads_input_from_a_file() {
    let path = std::env::temp_dir().join(format!("rorg-cli-test-{}.json", std::process::id()));
    std::fs::write(&path, K4).unwrap();
    let out = rorg(&["vcd", path.to_str().unwrap()], "");
    std::fs::remove_file(&path).ok();
    assert_eq!(json(&out)["vcd"], 6);
    assert_eq!(rorg(&["vcd", "/nonexistent/input.json"], "").status.code(), Some(2));
}

#[test]
fn witness_reports_verified_leaves() {
    let v = json(&rorg(&["witness"], r#"{"vertices":["a","b","x"],"edges":[["a","b"]]}"#));
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["leaves"][0]["out_rank"], 2);
    assert_eq!(v["leaves"][0]["generators"].as_array().unwrap().len(), 4);
}

#[test]
fn selftest_passes() {
    let out = rorg(&["selftest"], "");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 10);
}
