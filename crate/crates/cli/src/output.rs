use std::path::Path;

use lcs_core::report::{Envelope, RunManifest};
use lcs_core::{Error, Result, Verdict};
use serde::Serialize;
use serde_json::Value;

/// What a command produced: human lines, a JSON report, an optional DOT
/// diagram and the exit code.
pub struct Outcome {
    pub lines: Vec<String>,
    pub report: Value,
    pub dot: Option<String>,
    pub code: i32,
}

impl Outcome {
    pub fn new(lines: Vec<String>, report: impl Serialize, code: i32) -> Result<Self> {
        Ok(Outcome {
            lines,
            report: serde_json::to_value(report)?,
            dot: None,
            code,
        })
    }

    pub fn verdict(v: Verdict) -> Result<Self> {
        let mut lines = vec![v.to_string()];
        lines.extend(v.notes.iter().map(|n| format!("  note: {n}")));
        let code = v.exit_code();
        Outcome::new(lines, v, code)
    }

    /// A precondition or certificate failure reported as a falsification
    /// whose witness is the failure message.
    pub fn failure(check: &str, bound: &lcs_core::Ordinal, err: &Error) -> Result<Self> {
        Outcome::verdict(Verdict::falsified(check, bound, &[err.to_string()]))
    }
}

/// Pretty JSON of the report with its manifest; `-` means stdout.
pub fn write_json(path: &Path, manifest: RunManifest, report: Value) -> Result<Option<String>> {
    let text = serde_json::to_string_pretty(&Envelope { manifest, report })? + "\n";
    if path == Path::new("-") {
        return Ok(Some(text));
    }
    std::fs::write(path, text)?;
    Ok(None)
}
