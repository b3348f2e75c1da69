//! Run reports: what was run, on which inputs, and how each check went.

use sabinin_core::verify::{Check, Status};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub status: String,
    pub witness: String,
}

impl From<&Check> for CheckRecord {
    fn from(c: &Check) -> Self {
        CheckRecord { name: c.name.clone(), anchor: c.anchor.to_string(), status: c.status.label().to_string(), witness: c.witness.clone() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    /// Every check passed; inconclusive checks count as failures.
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
    pub output: Value,
}

impl RunReport {
    pub fn new(command: String, inputs_digest: String, checks: &[Check], output: Value) -> Self {
        let passed = checks.iter().all(|c| c.status == Status::Pass);
        RunReport { command, inputs_digest, passed, checks: checks.iter().map(CheckRecord::from).collect(), output }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// `body`, then one line per check and a tally.
    pub fn to_text(&self, body: &str) -> String {
        let mut out = String::from(body);
        if !out.is_empty() && !out.ends_with('\n') {
            out.push('\n');
        }
        for c in &self.checks {
            out.push_str(&format!("{:<12} [{}] {}", c.status, c.anchor, c.name));
            if !c.witness.is_empty() {
                out.push_str(&format!(": {}", c.witness));
            }
            out.push('\n');
        }
        let pass = self.checks.iter().filter(|c| c.status == "pass").count();
        out.push_str(&format!("{pass} of {} checks pass\n", self.checks.len()));
        out
    }
}

/// SHA-256 over the command line and the bytes of every input read.
#[derive(Default)]
pub struct InputDigest {
    hasher: Sha256,
}

impl InputDigest {
    pub fn add(&mut self, label: &str, bytes: &[u8]) {
        self.hasher.update((label.len() as u64).to_le_bytes());
        self.hasher.update(label.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn finish(self) -> String {
        format!("sha256:{:x}", self.hasher.finalize())
    }
}
