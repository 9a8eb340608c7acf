//! Machine-checkable verdicts for the inequality and theorem checks.

use std::fmt;
use std::io::Write;

/// One check's outcome: `passed` holds exactly when
/// `worst_violation <= tolerance`.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub name: String,
    pub passed: bool,
    pub worst_violation: f64,
    pub violation_node: Option<usize>,
    pub tolerance: f64,
    /// Free-text provenance: grid, order, seed, stage details.
    pub context: String,
}

impl PropertyReport {
    pub fn new(
        name: impl Into<String>,
        worst_violation: f64,
        violation_node: Option<usize>,
        tolerance: f64,
        context: impl Into<String>,
    ) -> Self {
        PropertyReport {
            name: name.into(),
            passed: worst_violation <= tolerance,
            worst_violation,
            violation_node,
            tolerance,
            context: context.into(),
        }
    }

    pub fn write_line(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{self}")
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let node = match self.violation_node {
            Some(n) => n.to_string(),
            None => "-".into(),
        };
        write!(
            f,
            "{} {} worst={:e} node={} tol={:e} | {}",
            self.name,
            if self.passed { "pass" } else { "FAIL" },
            self.worst_violation,
            node,
            self.tolerance,
            self.context
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_iff_within_tolerance() {
        let r = PropertyReport::new("x", 1e-13, None, 1e-12, "ctx");
        assert!(r.passed);
        let r = PropertyReport::new("x", 2e-12, Some(3), 1e-12, "ctx");
        assert!(!r.passed);
        let line = r.to_string();
        assert!(line.contains("FAIL") && line.contains("node=3"));
    }
}
