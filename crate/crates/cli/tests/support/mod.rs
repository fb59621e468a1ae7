#![allow(dead_code)]

pub mod criteria;
pub mod structural;
pub mod topology;

use std::process::Command;

/// Runs the `lcs` binary; returns the exit code and stdout.
pub fn lcs(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lcs"))
        .args(args)
        .output()
        .expect("lcs runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

/// Runs `lcs --json - ...` and parses the envelope.
pub fn lcs_json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut all = vec!["--json", "-"];
    all.extend_from_slice(args);
    let (code, text) = lcs(&all);
    let v = serde_json::from_str(&text).unwrap_or(serde_json::Value::Null);
    (code, v)
}
