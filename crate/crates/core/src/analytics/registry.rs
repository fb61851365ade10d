//! Named constants and exponents, each tagged with where its value came from.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::formulas::{blowup_function, decay_exponent};
use crate::error::{LandauError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Computed from other registry entries.
    Formula,
    /// Fitted by a calibration run.
    Calibrated,
    /// Set explicitly.
    User,
    /// Placeholder value 1, not calibrated.
    Default,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constant {
    pub value: f64,
    pub provenance: Provenance,
}

impl Constant {
    pub fn is_calibrated(&self) -> bool {
        self.provenance == Provenance::Calibrated
    }
}

/// Every constant with no closed formula.
pub const FREE_CONSTANTS: [&str; 13] = [
    "C0", "CD1", "CD2", "C1", "C2", "C3", "C4", "C5", "C11", "C_coercive", "C_lower", "c_upper", "K",
];

/// Constants that have a formula in terms of the others.
pub const DERIVED_CONSTANTS: [&str; 3] = ["B_star", "C6", "C7"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsRegistry {
    /// Moment order ℓ.
    pub ell: f64,
    pub tau: f64,
    /// Weight index used for k1 (15/4; 14/5 is the alternative reading).
    pub theta_k1: f64,
    /// Weight index used for k3.
    pub theta_k3: f64,
    /// Safety margin subtracted from every rate.
    pub delta_rate: f64,
    /// Exponents set directly instead of from ℓ.
    #[serde(default)]
    pub overrides: RateOverrides,
    pub constants: BTreeMap<String, Constant>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateOverrides {
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub k3: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rates {
    pub k1: f64,
    pub k2: f64,
    pub k: f64,
    pub k3: f64,
    pub r1: f64,
    pub r2: f64,
}

impl Default for ConstantsRegistry {
    fn default() -> Self {
        let mut constants = BTreeMap::new();
        for name in FREE_CONSTANTS {
            constants.insert(
                name.to_string(),
                Constant {
                    value: 1.0,
                    provenance: Provenance::Default,
                },
            );
        }
        for name in DERIVED_CONSTANTS {
            constants.insert(
                name.to_string(),
                Constant {
                    value: f64::NAN,
                    provenance: Provenance::Formula,
                },
            );
        }
        let mut r = ConstantsRegistry {
            ell: 55.0,
            tau: 45.0,
            theta_k1: 15.0 / 4.0,
            theta_k3: 15.0 / 4.0 + 7.0,
            delta_rate: 0.0,
            overrides: RateOverrides::default(),
            constants,
        };
        r.refresh().expect("default registry is consistent");
        r
    }
}

impl ConstantsRegistry {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let mut r: ConstantsRegistry = serde_path_to_error::deserialize(de)
            .map_err(|e| LandauError::Config(format!("registry {}: {}", e.path(), e.inner())))?;
        for name in FREE_CONSTANTS.iter().chain(DERIVED_CONSTANTS.iter()) {
            if !r.constants.contains_key(*name) {
                let default = ConstantsRegistry::default();
                r.constants.insert(name.to_string(), default.constants[*name]);
            }
        }
        if let Some(extra) = r
            .constants
            .keys()
            .find(|k| !FREE_CONSTANTS.contains(&k.as_str()) && !DERIVED_CONSTANTS.contains(&k.as_str()))
        {
            return Err(LandauError::Config(format!("registry /constants/{extra}: unknown constant")));
        }
        r.refresh()?;
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("registry serializes")
    }

    pub fn get(&self, name: &str) -> f64 {
        self.constants
            .get(name)
            .unwrap_or_else(|| panic!("unknown constant {name}"))
            .value
    }

    pub fn entry(&self, name: &str) -> Option<&Constant> {
        self.constants.get(name)
    }

    /// Sets a value and recomputes formula-derived entries.
    pub fn set(&mut self, name: &str, value: f64, provenance: Provenance) -> Result<()> {
        if !self.constants.contains_key(name) {
            return Err(LandauError::Config(format!("unknown constant {name}")));
        }
        if !value.is_finite() {
            return Err(LandauError::Config(format!("constant {name} must be finite")));
        }
        self.constants
            .insert(name.to_string(), Constant { value, provenance });
        self.refresh()
    }

    /// Names of constants whose values were fitted.
    pub fn calibrated(&self) -> Vec<String> {
        self.constants
            .iter()
            .filter(|(_, c)| c.is_calibrated())
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn rates(&self) -> Result<Rates> {
        let r = |theta: f64| -> Result<f64> { Ok(-decay_exponent(self.ell, theta)? - self.delta_rate) };
        let r1 = r(99.0 / 4.0)?;
        let r2 = r(45f64.min(self.ell))?;
        let k2 = self.overrides.k2.unwrap_or(2.0 * r1);
        let k1 = self.overrides.k1.unwrap_or(0.8 * r(self.theta_k1)?);
        let k3 = self.overrides.k3.unwrap_or(0.8 * r(self.theta_k3)?);
        let k = ((2.0 * k2 - 7.0) / 5.0).min(k1);
        Ok(Rates { k1, k2, k, k3, r1, r2 })
    }

    /// Replace k1, k2 and recompute the formula constants.
    pub fn with_rates(mut self, k1: f64, k2: f64) -> Result<Self> {
        self.overrides.k1 = Some(k1);
        self.overrides.k2 = Some(k2);
        self.refresh()?;
        Ok(self)
    }

    pub fn b_star(&self) -> f64 {
        self.get("B_star")
    }

    fn refresh(&mut self) -> Result<()> {
        let rates = self.rates()?;
        let formula = |s: &Self, name: &str| s.constants[name].provenance == Provenance::Formula;
        if formula(self, "B_star") {
            let v = blowup_function(1.0 / self.get("C3"), self.get("C2"));
            self.constants.insert(
                "B_star".into(),
                Constant { value: v, provenance: Provenance::Formula },
            );
        }
        if formula(self, "C6") {
            let v = c6_from_proof(self.get("C1"), self.b_star(), rates.k2);
            self.constants
                .insert("C6".into(), Constant { value: v, provenance: Provenance::Formula });
        }
        if formula(self, "C7") {
            let v = 0.5 * self.get("C11").powf(-5.0 / 9.0);
            self.constants
                .insert("C7".into(), Constant { value: v, provenance: Provenance::Formula });
        }
        Ok(())
    }
}

/// C6 = 2^{-2/5} min(C1, c1) with c1 = (B*)^{-2/5}(k2 - 2).
pub fn c6_from_proof(c1_big: f64, b_star: f64, k2: f64) -> f64 {
    let c1 = b_star.powf(-0.4) * (k2 - 2.0);
    2f64.powf(-0.4) * c1_big.min(c1)
}
