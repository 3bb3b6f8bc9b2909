//! Pass/fail reporting shared by the check functions, the CLI and the
//! acceptance suite.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail { witness: String },
    Skip { reason: String },
}

impl CheckOutcome {
    pub fn fail(witness: impl Into<String>) -> Self {
        CheckOutcome::Fail {
            witness: witness.into(),
        }
    }

    pub fn from_eq(r: Result<(), (usize, usize, crate::RatFunc)>) -> Self {
        match r {
            Ok(()) => CheckOutcome::Pass,
            Err((row, col, residual)) => CheckOutcome::Fail {
                witness: format!("entry ({}, {}): residual {}", row, col, residual),
            },
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }

    pub fn and(self, other: impl FnOnce() -> CheckOutcome) -> CheckOutcome {
        if self.passed() {
            other()
        } else {
            self
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckOutcome::Pass => write!(f, "pass"),
            CheckOutcome::Fail { witness } => write!(f, "fail: {}", witness),
            CheckOutcome::Skip { reason } => write!(f, "skip: {}", reason),
        }
    }
}

/// One emitted record of a suite run.
#[derive(Clone, Debug)]
pub struct CaseRecord {
    pub suite: String,
    pub case_id: String,
    pub outcome: CheckOutcome,
    pub elapsed_ms: u128,
}

impl CaseRecord {
    pub fn status(&self) -> &'static str {
        match self.outcome {
            CheckOutcome::Pass => "pass",
            CheckOutcome::Fail { .. } => "fail",
            CheckOutcome::Skip { .. } => "skip",
        }
    }

    pub fn witness(&self) -> &str {
        match &self.outcome {
            CheckOutcome::Pass => "",
            CheckOutcome::Fail { witness } => witness,
            CheckOutcome::Skip { reason } => reason,
        }
    }

    /// Newline-delimited record with a stable field order.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"suite\":{},\"case_id\":{},\"status\":{},\"witness\":{},\"elapsed_ms\":{}}}",
            json_str(&self.suite),
            json_str(&self.case_id),
            json_str(self.status()),
            json_str(self.witness()),
            self.elapsed_ms
        )
    }
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Runs a named case, timing it.
pub fn run_case(suite: &str, case_id: &str, f: impl FnOnce() -> CheckOutcome) -> CaseRecord {
    let start = std::time::Instant::now();
    let outcome = f();
    CaseRecord {
        suite: suite.to_string(),
        case_id: case_id.to_string(),
        outcome,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_escaping_and_field_order() {
        let rec = CaseRecord {
            suite: "qybe".into(),
            case_id: "so3".into(),
            outcome: CheckOutcome::Pass,
            elapsed_ms: 12,
        };
        assert_eq!(
            rec.to_json(),
            "{\"suite\":\"qybe\",\"case_id\":\"so3\",\"status\":\"pass\",\"witness\":\"\",\"elapsed_ms\":12}"
        );
        let rec = CaseRecord {
            suite: "dsl".into(),
            case_id: "bad \"file\"".into(),
            outcome: CheckOutcome::fail("residual 1/(u-1)\nnext"),
            elapsed_ms: 0,
        };
        assert!(rec.to_json().contains("\\\"file\\\""));
        assert!(rec.to_json().contains("\\n"));
    }
}
