//! Run manifests embedded in every report.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::ordinal::Ordinal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub seed: u64,
    pub bound: Ordinal,
    pub version: String,
    /// Seconds since the Unix epoch; the only field that varies between
    /// reruns of the same command.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, args: Vec<String>, seed: u64, bound: Ordinal) -> Self {
        RunManifest {
            command: command.into(),
            args,
            seed,
            bound,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

/// A report wrapped with the manifest that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub manifest: RunManifest,
    pub report: T,
}
