use std::io::Write;
use std::process::{Command, Stdio};

fn fixture(rel: &str) -> String {
    format!("{}/fixtures/{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn nacurve() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nacurve"));
    for var in ["NACURVE_PRIME", "NACURVE_ELL", "NACURVE_SEED", "NACURVE_COUNT", "NACURVE_INPUT", "NACURVE_DOT"] {
        cmd.env_remove(var);
    }
    cmd
}

fn with_stdin(mut cmd: Command, input: &str) -> (i32, String, String) {
    let mut child = cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn reads_stdin() {
    let mut cmd = nacurve();
    cmd.args(["skeleton", "analyze"]);
    let (code, out, _) = with_stdin(cmd, r#"{"vertices": [{"g": 0}], "edges": [[0, 0]], "legs": [0]}"#);
    assert_eq!(code, 0);
    assert!(out.contains("\"tree_like\": false"));
}

#[test]
fn env_fallbacks() {
    let mut cmd = nacurve();
    cmd.args(["tree"]).env("NACURVE_PRIME", "2");
    let (code, out, err) = with_stdin(cmd, r#"[{"center": 0, "v": 2}, {"center": 2, "v": 3}]"#);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.matches("\"center\"").count(), 3);

    let out = nacurve().args(["fuzz"]).env("NACURVE_SEED", "3").env("NACURVE_COUNT", "50").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"checked\": 50"));
}

#[test]
fn writes_dot() {
    let dir = std::env::temp_dir().join(format!("nacurve-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("tree.dot");
    let status = nacurve()
        .args(["tree", "--input", &fixture("disks/closure_example.json"), "--dot"])
        .arg(&dot)
        .stdout(Stdio::null())
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph disk_tree {"));
    assert!(text.contains("D(0, 1)"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn check_report_shape() {
    let out =
        nacurve().args(["cover", "check", "--input", &fixture("covers/z4_one_failing_edge.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["almost_semistable", "semistable", "conditional_on", "failing_edges", "schema_version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["failing_edges"].as_array().unwrap().len(), 1);
    assert_eq!(v["conditional_on"].as_array().unwrap().len(), 2);
}

#[test]
fn errors_go_to_stderr() {
    let out = nacurve().args(["cover", "check", "--input", &fixture("covers/z4_missing_h1.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8(out.stderr).unwrap().contains("h1_character"));
    let out = nacurve().args(["tree", "--input", "/nonexistent/disks.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
