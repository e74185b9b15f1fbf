use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// How a check reached its status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Every case was enumerated.
    Exhaustive,
    /// A closed-form inequality was checked; no enumeration.
    Certificate,
    /// Enumeration stopped at a cap; the claim is unverified beyond it.
    Sampled,
    /// Nothing was checked.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: CheckStatus,
    pub evidence: Evidence,
    pub summary: String,
    /// Counts and other numbers behind the summary.
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
    /// Counterexample for a failed check.
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub witness: Value,
    pub elapsed_ms: u64,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, status: CheckStatus, evidence: Evidence, summary: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            status,
            evidence,
            summary: summary.into(),
            data: Value::Null,
            witness: Value::Null,
            elapsed_ms: 0,
        }
    }

    pub fn pass(name: impl Into<String>, evidence: Evidence, summary: impl Into<String>) -> Self {
        Self::new(name, CheckStatus::Pass, evidence, summary)
    }

    pub fn fail(name: impl Into<String>, evidence: Evidence, summary: impl Into<String>) -> Self {
        Self::new(name, CheckStatus::Fail, evidence, summary)
    }

    pub fn skipped(name: impl Into<String>, summary: impl Into<String>) -> Self {
        Self::new(name, CheckStatus::Skipped, Evidence::None, summary)
    }

    /// Pass or fail depending on `ok`.
    pub fn judged(name: impl Into<String>, ok: bool, evidence: Evidence, summary: impl Into<String>) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Self::new(name, status, evidence, summary)
    }

    pub fn with_data(mut self, data: Value) -> Self {
        self.data = data;
        self
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = witness;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

/// Runs `f` and stamps the record with its wall-clock time.
pub fn timed(f: impl FnOnce() -> CheckRecord) -> CheckRecord {
    let start = Instant::now();
    let mut record = f();
    record.elapsed_ms = start.elapsed().as_millis() as u64;
    record
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub verdict: Verdict,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            verdict: Verdict::Pass,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        if record.failed() {
            self.verdict = Verdict::Fail;
        }
        self.checks.push(record);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Verdict recomputed from the records; equals `verdict` for any report
    /// built through `push`.
    pub fn recomputed_verdict(&self) -> Verdict {
        if self.checks.iter().any(CheckRecord::failed) {
            Verdict::Fail
        } else {
            Verdict::Pass
        }
    }

    /// Copy with every `elapsed_ms` zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        let mut copy = self.clone();
        for c in &mut copy.checks {
            c.elapsed_ms = 0;
        }
        copy
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.subject);
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            let evidence = match c.evidence {
                Evidence::Exhaustive => "exhaustive",
                Evidence::Certificate => "certified, not exhaustively checked",
                Evidence::Sampled => "sampled, unverified beyond cap",
                Evidence::None => "not checked",
            };
            let _ = writeln!(
                out,
                "  [{status}] {} ({evidence}, {} ms): {}",
                c.name, c.elapsed_ms, c.summary
            );
        }
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        let _ = writeln!(out, "verdict: {verdict}");
        out
    }
}
