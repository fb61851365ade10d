//! Trial reports for inequality checks.

use serde::Serialize;

use crate::calibration::{fit_lower, fit_upper, Fit, ROUNDOFF};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IneqReport {
    pub id: String,
    pub trials: usize,
    /// Counted on the test split when a constant was fitted, else on all trials.
    pub violations: usize,
    /// max lhs/rhs over the counted trials (with the fitted constant applied).
    pub worst_ratio: f64,
    pub fit: Option<Fit>,
}

impl IneqReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }

    /// lhs ≤ rhs with a relative roundoff allowance `slack`.
    pub fn direct(id: impl Into<String>, pairs: &[(f64, f64)], slack: f64) -> Self {
        let mut violations = 0;
        let mut worst = 0.0f64;
        for &(l, r) in pairs {
            if !(l <= r + slack * (l.abs() + r.abs()) + f64::MIN_POSITIVE) {
                violations += 1;
            }
            if r > 0.0 {
                worst = worst.max(l / r);
            } else if l > 0.0 {
                worst = f64::INFINITY;
            }
        }
        IneqReport { id: id.into(), trials: pairs.len(), violations, worst_ratio: worst, fit: None }
    }

    /// lhs ≤ C·rhs with C fitted on a seeded half.
    pub fn fitted_upper(id: impl Into<String>, pairs: &[(f64, f64)], seed: u64) -> Self {
        let fit = fit_upper(pairs, seed);
        IneqReport { id: id.into(), trials: pairs.len(), violations: fit.violations, worst_ratio: fit.worst_ratio, fit: Some(fit) }
    }

    /// lhs ≥ c·rhs with c fitted on a seeded half.
    pub fn fitted_lower(id: impl Into<String>, pairs: &[(f64, f64)], seed: u64) -> Self {
        let fit = fit_lower(pairs, seed);
        IneqReport { id: id.into(), trials: pairs.len(), violations: fit.violations, worst_ratio: fit.worst_ratio, fit: Some(fit) }
    }

    pub fn from_fit(id: impl Into<String>, fit: Fit) -> Self {
        IneqReport { id: id.into(), trials: fit.train.len() + fit.test.len(), violations: fit.violations, worst_ratio: fit.worst_ratio, fit: Some(fit) }
    }
}

/// Default roundoff allowance for constant-free checks.
pub const DIRECT_SLACK: f64 = ROUNDOFF;
