mod support;

use support::{lcs, lcs_json};

fn family_file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn ordinal_expressions_normalize() {
    assert_eq!(lcs(&["ord", "w+1+w"]), (0, "w*2\n".to_string()));
    assert_eq!(lcs(&["ord", "cmp(w^2, w*5)"]).1.trim(), "GT");
    assert_eq!(lcs(&["ord", "divmod(w*3+5, w)"]).1.trim(), "(3, 5)");
}

#[test]
fn oracle_flag_reports_agreement() {
    let (code, out) = lcs(&["ord", "--oracle", "(w+1)*(w^3+w^2+1)"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("agree"), "{out}");
}

#[test]
fn usage_and_parse_errors_exit_3() {
    assert_eq!(lcs(&["ord", "w+"]).0, 3);
    assert_eq!(lcs(&["no-such-command"]).0, 3);
    assert_eq!(lcs(&["family", "build", "--family", "E(w"]).0, 3);
}

#[test]
fn verdicts_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = family_file(&dir, "bad.json", r#"{"ground": "3", "members": ["{0,1}", "{1,2}"]}"#);
    assert_eq!(lcs(&["family", "verify", "--family", "E(2,2)", "--prop", "cap_closed,tree_like"]).0, 0);
    assert_eq!(lcs(&["family", "verify", "--file", &bad, "--prop", "cap_closed"]).0, 1);
    assert_eq!(lcs(&["--budget", "2", "family", "build", "--family", "E(3,3)"]).0, 2);
}

#[test]
fn json_envelope_carries_the_manifest() {
    let (code, v) = lcs_json(&["--seed", "7", "family", "verify", "--family", "E(2,2)", "--prop", "tree_like"]);
    assert_eq!(code, 0);
    let m = &v["manifest"];
    assert_eq!(m["command"], "family");
    assert_eq!(m["seed"], 7);
    assert_eq!(m["bound"], "200");
    assert!(m["args"].as_array().unwrap().iter().any(|a| a == "tree_like"));
    assert!(v["report"].is_object());
}

#[test]
fn reports_are_deterministic_under_a_seed() {
    let args = ["--seed", "7", "space", "analyze", "--family", "E(w,2)"];
    let (_, a) = lcs_json(&args);
    let (_, b) = lcs_json(&args);
    assert_eq!(a["report"], b["report"]);
    assert_eq!(a["manifest"]["args"], b["manifest"]["args"]);
}

#[test]
fn input_files_are_left_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"ground": "4", "members": ["{0}", "{0,1}", "{2,3}"]}"#;
    let f = family_file(&dir, "f.json", text);
    let out = dir.path().join("star.json");
    let out = out.to_str().unwrap();
    assert_eq!(lcs(&["family", "star", "--file", &f, "--out", out]).0, 0);
    assert_eq!(lcs(&["space", "analyze", "--file", &f]).0, 0);
    assert_eq!(std::fs::read_to_string(&f).unwrap(), text);
    assert!(std::fs::read_to_string(out).unwrap().contains("members"));
}

#[test]
fn dot_export_is_a_digraph() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("h.dot");
    let dot = dot.to_str().unwrap();
    assert_eq!(lcs(&["--dot", dot, "space", "analyze", "--family", "E(2,2)"]).0, 0);
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.trim_end().ends_with('}'));
}

#[test]
fn precondition_failures_exit_1_with_the_offending_sets() {
    let (code, v) = lcs_json(&["space", "nbhd", "--family", "E(2,2)", "--member", "{0,1}", "--minus", "{2,3}"]);
    assert_eq!(code, 1);
    assert!(v["report"].to_string().contains("{2, 3}"));
}
