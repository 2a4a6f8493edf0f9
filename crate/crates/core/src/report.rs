//! Verification reports: one record per check, rendered as a table or as
//! JSON with a fixed key order.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Ran outside its certified setting (decomposition counts in positive
    /// characteristic); reported but not counted.
    Formal,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Formal => "formal",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub paper_ref: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub preset: String,
    pub field: String,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(preset: &str, field: &str, checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().all(|c| c.status != Status::Fail);
        VerificationReport {
            preset: preset.to_string(),
            field: field.to_string(),
            passed,
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("preset {} over {}\n", self.preset, self.field);
        let w = self.checks.iter().map(|c| c.check.len()).max().unwrap_or(5).max(5);
        for c in &self.checks {
            out.push_str(&format!(
                "{:<6} {:<w$} {:>7.3}s  expected: {}\n{:<6} {:<w$} {:>8}  computed: {}\n",
                c.status.to_string(),
                c.check,
                c.seconds,
                c.expected,
                "",
                "",
                "",
                c.computed,
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} checks, {} failed: {}\n",
            self.checks.len(),
            failed,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(status: Status) -> CheckRecord {
        CheckRecord {
            check: "c".into(),
            paper_ref: "r".into(),
            expected: "1".into(),
            computed: "1".into(),
            status,
            seconds: 0.0,
        }
    }

    #[test]
    fn formal_does_not_fail() {
        let r = VerificationReport::new("p", "Q", vec![record(Status::Pass), record(Status::Formal)]);
        assert!(r.passed);
        let r = VerificationReport::new("p", "Q", vec![record(Status::Fail)]);
        assert!(!r.passed);
    }

    #[test]
    fn json_key_order_is_stable() {
        let r = VerificationReport::new("p", "Q", vec![record(Status::Pass)]);
        let j = r.to_json();
        let keys = ["\"check\"", "\"paper_ref\"", "\"expected\"", "\"computed\"", "\"status\"", "\"seconds\""];
        let pos: Vec<usize> = keys.iter().map(|k| j.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(j.contains("\"status\": \"pass\""));
    }
}
