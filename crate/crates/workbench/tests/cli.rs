use std::process::Command;

fn cdgaw(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cdgaw")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn temp_spec(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("cdgaw-cli-{}-{name}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn success_prints_text_or_json() {
    let (code, out, _) = cdgaw(&["betti", "--preset", "paper-M", "--invariant"]);
    assert_eq!(code, 0);
    assert!(out.contains("betti: [1, 0, 13, 0, 26, 0, 13, 0, 1]"));
    let (code, out, _) = cdgaw(&["betti", "--preset", "paper-M", "--invariant", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["betti"][2], 13);
}

#[test]
fn exit_codes() {
    let bad_expr = temp_spec("expr", r#"{"schema": "cdgaw/1", "generators": [{"name": "a"}, {"name": "b"}], "differential": {"b": "a +"}}"#);
    let bad_d = temp_spec("d", r#"{"schema": "cdgaw/1", "generators": [{"name": "a"}, {"name": "b"}], "differential": {"b": "a"}}"#);
    assert_eq!(cdgaw(&["betti", "--spec", &bad_expr]).0, 3);
    assert_eq!(cdgaw(&["betti", "--spec", &bad_d]).0, 2);
    assert_eq!(cdgaw(&["betti", "--spec", "/nonexistent/spec.json"]).0, 1);
    assert_eq!(cdgaw(&["frobnicate", "--preset", "paper-M"]).0, 1);
    assert_eq!(cdgaw(&["betti"]).0, 1);
    assert_eq!(cdgaw(&["betti", "--preset", "paper-M", "--spec", &bad_d]).0, 1);
    assert_eq!(cdgaw(&["--help"]).0, 0);
    let (code, _, err) = cdgaw(&["betti", "--spec", &bad_expr]);
    assert_eq!(code, 3);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn spec_file_and_preset_give_the_same_results() {
    let text = cdgaw::presets::preset_text("heisenberg3").unwrap();
    let path = temp_spec("heis", text);
    let (_, a, _) = cdgaw(&["cohomology", "--spec", &path, "--json"]);
    let (_, b, _) = cdgaw(&["cohomology", "--preset", "heisenberg3", "--json"]);
    let a: serde_json::Value = serde_json::from_str(&a).unwrap();
    let b: serde_json::Value = serde_json::from_str(&b).unwrap();
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["inputs_digest"], b["inputs_digest"]);
}
