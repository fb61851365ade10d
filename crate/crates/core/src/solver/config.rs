use serde::{Deserialize, Serialize};

use crate::collision::Form;
use crate::error::{LandauError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Rk2,
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoKeyword {
    Auto,
}

/// `"auto"` or a fixed positive step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DtPolicy {
    Fixed(f64),
    Auto(AutoKeyword),
}

impl DtPolicy {
    pub const AUTO: DtPolicy = DtPolicy::Auto(AutoKeyword::Auto);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Positivity {
    None,
    Clip,
}

pub const DEFAULT_CFL: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub scheme: Scheme,
    pub dt: DtPolicy,
    pub c_cfl: f64,
    pub t_end: f64,
    pub sample_interval: f64,
    pub projection: bool,
    pub positivity: Positivity,
    pub form: Form,
    /// Weights m for which the weighted Ḣ¹ and L² balances are recorded; m = 0 is always done.
    pub balance_m: Vec<f64>,
    /// Skip the balance terms altogether (they cost about eight operator builds per sample).
    pub balance: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            scheme: Scheme::Rk4,
            dt: DtPolicy::AUTO,
            c_cfl: DEFAULT_CFL,
            t_end: 1.0,
            sample_interval: 0.05,
            projection: true,
            positivity: Positivity::None,
            form: Form::Divergence,
            balance_m: vec![4.0],
            balance: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(LandauError::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !(self.sample_interval > 0.0 && self.sample_interval <= self.t_end) {
            return Err(LandauError::Config(format!(
                "sample_interval must lie in (0, t_end], got {}",
                self.sample_interval
            )));
        }
        let ratio = self.t_end / self.sample_interval;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(LandauError::Config("sample_interval must divide t_end".into()));
        }
        if let DtPolicy::Fixed(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(LandauError::Config(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.c_cfl > 0.0 && self.c_cfl.is_finite()) {
            return Err(LandauError::Config(format!("c_cfl must be positive, got {}", self.c_cfl)));
        }
        if self.balance_m.iter().any(|m| !(*m >= 0.0)) {
            return Err(LandauError::Config("balance weights must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn samples(&self) -> usize {
        (self.t_end / self.sample_interval).round() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dt_policy_json() {
        let c: SolverConfig = serde_json::from_str(r#"{"dt":"auto"}"#).unwrap();
        assert_eq!(c.dt, DtPolicy::AUTO);
        let c: SolverConfig = serde_json::from_str(r#"{"dt":0.01,"scheme":"rk2"}"#).unwrap();
        assert_eq!(c.dt, DtPolicy::Fixed(0.01));
        assert!(serde_json::from_str::<SolverConfig>(r#"{"dt":"fast"}"#).is_err());
        assert!(serde_json::from_str::<SolverConfig>(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig { sample_interval: 0.3, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = SolverConfig { dt: DtPolicy::Fixed(-1.0), ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
