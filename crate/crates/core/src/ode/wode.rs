//! Weighted ODE d/dt Y² + C4(1+t)^{k3} Y^{14/5} = C5(Y⁴ + Y²), integrated for Z = Y².

use serde::Serialize;

use super::integrator::{integrate, Outcome, Tolerance};
use crate::analytics::ConstantsRegistry;
use crate::error::{LandauError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WodeClass {
    GlobalDecay,
    Blowup { t_b: f64 },
    Marginal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WodeReport {
    pub classification: WodeClass,
    pub t: Vec<f64>,
    /// Y² samples
    pub y2: Vec<f64>,
    /// First sample time at which Z ≤ 1 and the critical level Z_c(t) < 1.
    pub trapped_at: Option<f64>,
    /// Slope of ln Y against ln(1+t) over [t_end/10, t_end] (global decay only).
    pub fitted_exponent: Option<f64>,
    /// −(5/4)k3
    pub predicted_exponent: f64,
    pub k3: f64,
}

impl WodeReport {
    /// |fitted/predicted − 1|, when a fit exists.
    pub fn exponent_error(&self) -> Option<f64> {
        self.fitted_exponent.map(|e| (e / self.predicted_exponent - 1.0).abs())
    }
}

/// Number of log-spaced output samples.
pub const WODE_SAMPLES: usize = 400;

/// Below Z = 1 the right side is at most 2C5 Z − C4(1+t)^{k3} Z^{7/5}, so Z decreases wherever
/// Z > Z_c(t) = (2C5/C4)^{5/2}(1+t)^{−5k3/2}. Once Z ≤ 1 and Z_c < 1 the set {Z ≤ 1} cannot be left,
/// and Z then follows Z_c down; this is the decay certificate. Overflow of the guard is blowup.
pub fn wode_run(y0sq: f64, registry: &ConstantsRegistry, t_end: f64) -> Result<WodeReport> {
    if !(y0sq >= 0.0) {
        return Err(LandauError::Input(format!("Y0² must be nonnegative, got {y0sq}")));
    }
    if !(t_end > 0.0) {
        return Err(LandauError::Input(format!("t_end must be positive, got {t_end}")));
    }
    let k3 = registry.rates()?.k3;
    let (c4, c5) = (registry.get("C4"), registry.get("C5"));
    let rhs = |t: f64, z: f64| {
        let z = z.max(0.0);
        c5 * (z * z + z) - c4 * (1.0 + t).powf(k3) * z.powf(1.4)
    };
    let mut outputs = vec![0.0];
    let first = (t_end * 1e-6).min(1e-3);
    let ratio = (t_end / first).powf(1.0 / (WODE_SAMPLES - 1) as f64);
    outputs.extend((0..WODE_SAMPLES).map(|i| first * ratio.powi(i as i32)));
    *outputs.last_mut().unwrap() = t_end;
    let sol = integrate(rhs, y0sq, &outputs, &[], Tolerance::default());
    let zc = |t: f64| (2.0 * c5 / c4).powf(2.5) * (1.0 + t).powf(-2.5 * k3);
    let trapped_at = sol
        .times
        .iter()
        .zip(&sol.values)
        .find(|(t, z)| **z <= 1.0 && zc(**t) < 1.0)
        .map(|(t, _)| *t);
    let classification = match (sol.outcome, trapped_at) {
        (Outcome::Blowup(tb), _) => WodeClass::Blowup { t_b: tb },
        (Outcome::Reached, Some(_)) => WodeClass::GlobalDecay,
        _ => WodeClass::Marginal,
    };
    let fitted_exponent = if classification == WodeClass::GlobalDecay {
        fit_exponent(&sol.times, &sol.values, t_end / 10.0)
    } else {
        None
    };
    Ok(WodeReport {
        classification,
        t: sol.times,
        y2: sol.values,
        trapped_at,
        fitted_exponent,
        predicted_exponent: -1.25 * k3,
        k3,
    })
}

/// Least-squares slope of ln √z on ln(1+t) over samples with t ≥ t_from and z > 0.
fn fit_exponent(t: &[f64], z: &[f64], t_from: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(z)
        .filter(|(t, z)| **t >= t_from && **z > 0.0)
        .map(|(t, z)| ((1.0 + t).ln(), 0.5 * z.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Small and large initial data used for the survival check (C4 = C5 = 1, k3 = 3).
pub const SMALL_Y0: [f64; 5] = [1e-3, 5e-4, 2e-4, 1e-4, 1e-5];
pub const LARGE_Y0: [f64; 5] = [10.0, 20.0, 50.0, 100.0, 1000.0];

/// Registry with C4 = C5 = 1 and k3 = 3.
pub fn survival_registry() -> ConstantsRegistry {
    let mut r = ConstantsRegistry::default();
    r.overrides.k3 = Some(3.0);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_stays_zero() {
        let rep = wode_run(0.0, &survival_registry(), 10.0).unwrap();
        assert!(rep.y2.iter().all(|z| *z == 0.0));
        assert_eq!(rep.classification, WodeClass::GlobalDecay);
        assert!(rep.fitted_exponent.is_none());
    }

    #[test]
    fn small_decays_large_blows_up() {
        let reg = survival_registry();
        let small = wode_run(1e-6, &reg, 1000.0).unwrap();
        assert_eq!(small.classification, WodeClass::GlobalDecay);
        assert!(small.exponent_error().unwrap() < 0.15, "{:?}", small.fitted_exponent);
        let large = wode_run(100.0, &reg, 1000.0).unwrap();
        assert!(matches!(large.classification, WodeClass::Blowup { .. }));
    }

    #[test]
    fn short_horizon_is_marginal() {
        // Z_c(t) ≥ 1 until 1 + t = 2^{1/3}
        let rep = wode_run(0.25, &survival_registry(), 0.1).unwrap();
        assert_eq!(rep.classification, WodeClass::Marginal);
    }
}
