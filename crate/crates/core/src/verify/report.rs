use std::fmt::Write as _;

use serde::{Serialize, Serializer};

/// Writes non-finite reals as `"inf"`, `"-inf"` or `"nan"`.
pub fn ser_real<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

/// One named comparison `lhs ≈ rhs` (or `lhs <= rhs` for inclusions, where
/// `lhs` is the largest violation and `rhs` is 0).
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(serialize_with = "ser_real")]
    pub lhs: f64,
    #[serde(serialize_with = "ser_real")]
    pub rhs: f64,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Check {
    /// `|lhs - rhs| <= tol`, with equal infinities counting as equal.
    pub fn close(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let ok = lhs == rhs || (lhs - rhs).abs() <= tol;
        Self::with(name, lhs, rhs, tol, ok)
    }

    /// `lhs <= rhs + tol`.
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let ok = lhs <= rhs + tol;
        Self::with(name, lhs, rhs, tol, ok)
    }

    pub fn with(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64, ok: bool) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            tolerance: tol,
            status: if ok { Status::Pass } else { Status::Fail },
            note: String::new(),
        }
    }

    pub fn failed(name: impl Into<String>, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            tolerance: 0.0,
            status: Status::Fail,
            note: note.into(),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub instance_id: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn hard_failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.hard_failures().next().is_none()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Fixed-width table, one line per check.
    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "instance {} (seed {})", self.instance_id, self.seed);
        let _ = writeln!(out, "{:<width$}  {:>14}  {:>14}  {:>8}  status", "name", "lhs", "rhs", "tol");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Info => "info",
            };
            let _ = write!(
                out,
                "{:<width$}  {:>14.9}  {:>14.9}  {:>8.1e}  {status}",
                c.name, c.lhs, c.rhs, c.tolerance
            );
            if !c.note.is_empty() {
                let _ = write!(out, "  ({})", c.note);
            }
            out.push('\n');
        }
        let fails = self.hard_failures().count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), fails);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_serializes_as_string() {
        let c = Check::close("x", f64::INFINITY, f64::INFINITY, 1e-9);
        assert!(c.passed());
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["lhs"], "inf");
        assert_eq!(v["status"], "pass");
    }

    #[test]
    fn table_counts_failures() {
        let r = VerifyReport {
            instance_id: "t".into(),
            seed: 1,
            checks: vec![Check::close("a", 1.0, 2.0, 0.1), Check::at_most("b", 0.0, 0.0, 0.0)],
        };
        assert!(!r.all_passed());
        assert!(r.to_table().ends_with("2 checks, 1 failed\n"));
    }
}
