//! Named residual checks and their aggregation.

use serde::{Deserialize, Serialize};

/// Default pass threshold for floating-point residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Absolute deviation from the identity.
    pub residual: f64,
    /// Size of the quantities involved; tolerances are relative to it.
    pub scale: f64,
    /// Computed in exact arithmetic, so only a zero residual passes.
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actual: Option<f64>,
}

impl Check {
    pub fn residual(name: impl Into<String>, residual: f64, exact: bool) -> Self {
        Check { name: name.into(), residual, scale: 1.0, exact, expected: None, actual: None }
    }

    pub fn compare(name: impl Into<String>, expected: f64, actual: f64, exact_residual: Option<f64>) -> Self {
        let residual = exact_residual.unwrap_or((expected - actual).abs());
        Check {
            name: name.into(),
            residual,
            scale: expected.abs().max(1.0),
            exact: exact_residual.is_some(),
            expected: Some(expected),
            actual: Some(actual),
        }
    }

    /// Compares two scalars; exact fields record the exact deviation.
    pub fn values<S: crate::scalar::Scalar>(name: impl Into<String>, expected: &S, actual: &S) -> Self {
        let diff = (expected.clone() - actual.clone()).magnitude();
        let mut c = Self::compare(name, expected.to_f64(), actual.to_f64(), None);
        c.residual = diff;
        c.exact = S::EXACT;
        c
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale.max(1.0);
        self
    }

    pub fn passed(&self, tol: f64) -> bool {
        if self.exact {
            self.residual == 0.0
        } else {
            self.residual.is_finite() && self.residual <= tol * self.scale.max(1.0)
        }
    }
}

/// Checks that failed at the given tolerance.
pub fn failures(checks: &[Check], tol: f64) -> Vec<&Check> {
    checks.iter().filter(|c| !c.passed(tol)).collect()
}

/// Plain-text table, one line per check.
pub fn render_checks(checks: &[Check], tol: f64) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let status = if c.passed(tol) { "ok  " } else { "FAIL" };
        let mut line = format!("{status} {:<width$}  residual {:.3e}", c.name, c.residual);
        if let (Some(e), Some(a)) = (c.expected, c.actual) {
            line.push_str(&format!("  expected {e:.6}  actual {a:.6}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_checks_need_zero() {
        assert!(Check::residual("a", 0.0, true).passed(1.0));
        assert!(!Check::residual("a", 1e-30, true).passed(1.0));
        assert!(Check::residual("a", 1e-12, false).passed(1e-9));
    }

    #[test]
    fn tolerance_is_relative_to_scale() {
        let c = Check::compare("s", 1e6, 1e6 + 1e-4, None);
        assert!(c.passed(1e-9));
        assert!(!Check::compare("s", 1.0, 1.0 + 1e-4, None).passed(1e-9));
    }

    #[test]
    fn serde_round_trip() {
        let c = Check::compare("x", 2.0, 2.5, None);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<Check>(&text).unwrap(), c);
    }
}
