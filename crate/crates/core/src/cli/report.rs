use std::fmt::Write;

use serde::Serialize;

use super::RunConfig;
use crate::outcome::{CheckResult, Status};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub vacuous: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub params: RunConfig,
    pub version: String,
    pub seed: u64,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn new(params: RunConfig, results: Vec<CheckResult>) -> Report {
        let mut summary = Summary::default();
        for r in &results {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
                Status::Vacuous => summary.vacuous += 1,
            }
        }
        Report { seed: params.seed, params, version: env!("CARGO_PKG_VERSION").to_string(), results, summary }
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.fail == 0 {
            0
        } else {
            1
        }
    }

    pub fn find(&self, name: &str, params: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.name == name && r.params == params)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "steinweil {} seed={} tier={:?} l={}", self.version, self.seed, self.params.tier, self.params.l);
        for r in &self.results {
            let _ = write!(out, "{:<8} {:<24} {:<28} {}", r.status.as_str(), r.name, r.params, r.detail);
            if let Some(ms) = r.wall_ms {
                let _ = write!(out, " [{ms} ms]");
            }
            out.push('\n');
            if let Some(cx) = &r.counterexample {
                let _ = writeln!(out, "         counterexample: {cx}");
            }
        }
        let s = &self.summary;
        let _ = writeln!(out, "summary: pass={} fail={} skipped={} vacuous={}", s.pass, s.fail, s.skipped, s.vacuous);
        out
    }
}
