//! Named statistics with reference values and verdicts, emitted as JSON lines.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// pass iff |value - reference| <= tolerance
    AbsoluteDifference,
    /// pass iff value <= reference + tolerance
    AtMost,
    /// pass iff value >= reference - tolerance
    AtLeast,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub name: String,
    pub value: f64,
    /// None means the value is exact (no Monte Carlo error).
    pub stderr: Option<f64>,
    pub reference: f64,
    pub reference_provenance: String,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
    /// Time-speed tag of the underlying scheme, when one applies.
    pub speed: Option<f64>,
    /// Echo of the configuration that produced the number.
    pub config: serde_json::Value,
}

impl Report {
    pub fn evaluate(
        name: impl Into<String>,
        value: f64,
        stderr: Option<f64>,
        reference: f64,
        provenance: impl Into<String>,
        tolerance: f64,
        comparison: Comparison,
        speed: Option<f64>,
        config: serde_json::Value,
    ) -> Self {
        let pass = match comparison {
            Comparison::AbsoluteDifference => (value - reference).abs() <= tolerance,
            Comparison::AtMost => value <= reference + tolerance,
            Comparison::AtLeast => value >= reference - tolerance,
        };
        Self {
            name: name.into(),
            value,
            stderr,
            reference,
            reference_provenance: provenance.into(),
            tolerance,
            comparison,
            pass,
            speed,
            config,
        }
    }

    pub fn verdict_line(&self) -> String {
        format!(
            "[{}] {}: value {:.6} vs reference {:.6} (tol {:.6}){}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.reference,
            self.tolerance,
            match self.stderr {
                Some(e) => format!(" stderr {e:.2e}"),
                None => String::new(),
            }
        )
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        let r = Report::evaluate("a", 1.0, None, 1.005, "x", 0.01, Comparison::AbsoluteDifference, None, serde_json::json!({}));
        assert!(r.pass);
        let r = Report::evaluate("b", 0.3, None, 0.25, "x", 0.0, Comparison::AtMost, None, serde_json::json!({}));
        assert!(!r.pass);
        let r = Report::evaluate("c", 0.3, None, 0.25, "x", 0.0, Comparison::AtLeast, None, serde_json::json!({}));
        assert!(r.pass);
    }

    #[test]
    fn json_line_has_fields() {
        let r = Report::evaluate("n", 1.0, Some(0.1), 1.0, "p", 0.5, Comparison::AbsoluteDifference, Some(0.5), serde_json::json!({"k": 6}));
        let line = r.to_json_line();
        for key in ["name", "value", "stderr", "reference", "tolerance", "pass", "speed", "config"] {
            assert!(line.contains(key), "{key} missing in {line}");
        }
    }
}
