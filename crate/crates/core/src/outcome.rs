//! Check outcomes shared by every verification routine.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Vacuous,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Vacuous => "vacuous",
        }
    }
}

/// Result of one verification routine, before it is labelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub detail: String,
    pub counterexample: Option<String>,
}

impl Verdict {
    pub fn pass(detail: impl Into<String>) -> Verdict {
        Verdict { status: Status::Pass, detail: detail.into(), counterexample: None }
    }

    pub fn fail(detail: impl Into<String>, counterexample: impl Into<String>) -> Verdict {
        let cx = counterexample.into();
        let cx = if cx.is_empty() { "unspecified".to_string() } else { cx };
        Verdict { status: Status::Fail, detail: detail.into(), counterexample: Some(cx) }
    }

    pub fn skipped(reason: impl Into<String>) -> Verdict {
        Verdict { status: Status::Skipped, detail: reason.into(), counterexample: None }
    }

    pub fn vacuous(reason: impl Into<String>) -> Verdict {
        Verdict { status: Status::Vacuous, detail: reason.into(), counterexample: None }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    /// Combines several sub-verdicts: any failure fails, otherwise pass if any
    /// passed, otherwise the first status.
    pub fn all(parts: Vec<Verdict>, detail: impl Into<String>) -> Verdict {
        let detail = detail.into();
        if let Some(f) = parts.iter().find(|v| v.status == Status::Fail) {
            return Verdict::fail(format!("{detail}: {}", f.detail), f.counterexample.clone().unwrap_or_default());
        }
        if parts.iter().any(|v| v.status == Status::Pass) {
            return Verdict::pass(detail);
        }
        match parts.first() {
            Some(v) => Verdict { status: v.status, detail: format!("{detail}: {}", v.detail), counterexample: None },
            None => Verdict::vacuous(format!("{detail}: nothing to check")),
        }
    }
}

/// Counts assertions and keeps the first failure message.
#[derive(Default, Debug)]
pub struct Tally {
    pub checked: usize,
    pub failed: usize,
    first: Option<String>,
}

impl Tally {
    pub fn new() -> Tally {
        Tally::default()
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(msg());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn verdict(self, what: &str) -> Verdict {
        if self.failed == 0 {
            if self.checked == 0 {
                Verdict::vacuous(format!("{what}: no instances"))
            } else {
                Verdict::pass(format!("{what}: {} instances", self.checked))
            }
        } else {
            Verdict::fail(
                format!("{what}: {} of {} instances failed", self.failed, self.checked),
                self.first.unwrap_or_default(),
            )
        }
    }
}

/// One labelled entry of a report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub params: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CheckResult {
    pub fn new(name: &str, params: &str, v: Verdict) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            params: params.to_string(),
            status: v.status,
            detail: v.detail,
            counterexample: v.counterexample,
            wall_ms: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fail_always_has_payload() {
        let v = Verdict::fail("x", "");
        assert!(v.counterexample.is_some());
        let mut t = Tally::new();
        t.check(false, || "boom".into());
        let v = t.verdict("thing");
        assert_eq!(v.status, Status::Fail);
        assert_eq!(v.counterexample.as_deref(), Some("boom"));
    }

    #[test]
    fn combine() {
        let v = Verdict::all(vec![Verdict::pass("a"), Verdict::skipped("b")], "c");
        assert!(v.is_pass());
        let v = Verdict::all(vec![Verdict::vacuous("b")], "c");
        assert_eq!(v.status, Status::Vacuous);
        assert_eq!(Tally::new().verdict("z").status, Status::Vacuous);
    }
}
