//! Run reports: line-oriented `key: value` text or JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use flw_core::saturation::BoundsReport;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Yes,
    No,
    NoWithinCap,
    BudgetExceeded,
    Error,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
            Outcome::NoWithinCap => "no_within_cap",
            Outcome::BudgetExceeded => "budget_exceeded",
            Outcome::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Yes => 0,
            Outcome::No | Outcome::NoWithinCap => 1,
            Outcome::Error => 2,
            Outcome::BudgetExceeded => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        InputDigest { path: path.to_string(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsSummary {
    pub passed: bool,
    pub phi_size: usize,
    pub phi_limit: usize,
    pub size_r: u128,
    pub theory_size: u128,
    pub norm_violations: usize,
    pub control_ok: bool,
}

impl From<&BoundsReport> for BoundsSummary {
    fn from(r: &BoundsReport) -> Self {
        BoundsSummary {
            passed: r.passed(),
            phi_size: r.phi_size,
            phi_limit: r.phi_limit,
            size_r: r.size_r,
            theory_size: r.theory_size,
            norm_violations: r.norm_violations.len(),
            control_ok: r.control_ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub verdict: Outcome,
    pub iterations: Option<usize>,
    pub frontier_size: Option<usize>,
    /// Largest admitted norm per iteration.
    pub norms: Vec<u128>,
    pub bounds: Option<BoundsSummary>,
    pub proof_path: Option<String>,
    pub details: BTreeMap<String, String>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: Vec::new(),
            verdict: Outcome::Error,
            iterations: None,
            frontier_size: None,
            norms: Vec::new(),
            bounds: None,
            proof_path: None,
            details: BTreeMap::new(),
            wall_time_ms: 0.0,
        }
    }

    pub fn detail(&mut self, key: &str, value: impl ToString) {
        self.details.insert(key.to_string(), value.to_string());
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for i in &self.inputs {
            let _ = writeln!(out, "input: {} sha256={}", i.path, i.sha256);
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        if let Some(n) = self.iterations {
            let _ = writeln!(out, "iterations: {n}");
        }
        if let Some(n) = self.frontier_size {
            let _ = writeln!(out, "frontier_size: {n}");
        }
        if !self.norms.is_empty() {
            let norms: Vec<String> = self.norms.iter().map(u128::to_string).collect();
            let _ = writeln!(out, "norms: {}", norms.join(" "));
        }
        if let Some(b) = &self.bounds {
            let _ = writeln!(
                out,
                "bounds: {} phi={}/{} size_r={} theory_size={} norm_violations={} control={}",
                if b.passed { "passed" } else { "failed" },
                b.phi_size,
                b.phi_limit,
                b.size_r,
                b.theory_size,
                b.norm_violations,
                if b.control_ok { "ok" } else { "violated" }
            );
        }
        if let Some(p) = &self.proof_path {
            let _ = writeln!(out, "proof: {p}");
        }
        for (k, v) in &self.details {
            let _ = writeln!(out, "{k}: {v}");
        }
        let _ = writeln!(out, "wall_time_ms: {:.3}", self.wall_time_ms);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
