//! Replayable inequality records shared by the one-dimensional checks and the harness.

use serde::Serialize;

/// Default multiple of the combined error estimates tolerated as a negative margin.
pub const TOLERANCE_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality {
    pub label: String,
    pub lhs: f64,
    /// `"<="` or `">="`.
    pub relation: &'static str,
    pub rhs: f64,
    /// Signed slack, positive when the inequality holds strictly.
    pub margin: f64,
    /// The inequality counts as satisfied when `margin >= -tolerance`.
    pub tolerance: f64,
    pub holds: bool,
}

impl Inequality {
    /// `lhs <= rhs` up to `tolerance`.
    pub fn at_most(label: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::build(label.into(), lhs, "<=", rhs, rhs - lhs, tolerance)
    }

    /// `lhs >= rhs` up to `tolerance`.
    pub fn at_least(label: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::build(label.into(), lhs, ">=", rhs, lhs - rhs, tolerance)
    }

    fn build(label: String, lhs: f64, relation: &'static str, rhs: f64, margin: f64, tolerance: f64) -> Self {
        Self {
            label,
            lhs,
            relation,
            rhs,
            margin,
            tolerance,
            holds: margin >= -tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins_and_tolerance() {
        let a = Inequality::at_most("a", 1.0, 2.0, 0.0);
        assert!(a.holds && a.margin == 1.0);
        let b = Inequality::at_least("b", 1.0, 1.1, 0.2);
        assert!(b.holds && (b.margin + 0.1).abs() < 1e-15);
        assert!(!Inequality::at_least("c", 1.0, 1.1, 0.05).holds);
        assert!(!Inequality::at_most("d", f64::NAN, 1.0, 1.0).holds);
    }
}
