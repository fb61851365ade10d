//! Local existence horizon from d/dt X² ≤ X^{18/5} + C11.

use serde::Serialize;

use super::integrator::{integrate, Outcome, Tolerance};
use crate::analytics::formulas::lifespan_value;
use crate::analytics::ConstantsRegistry;
use crate::error::{LandauError, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LifespanReport {
    pub x0sq: f64,
    pub c11: f64,
    /// Vertical asymptote (5/4)(X0² + C11^{5/9})^{−4/5} of the closed-form envelope.
    pub asymptote: f64,
    /// 𝓣 with C7 = ½C11^{−5/9}, i.e. (5/4)(X0² + 2C11^{5/9})^{−4/5}.
    pub lifespan: f64,
    pub c7: f64,
    pub t: Vec<f64>,
    pub envelope: Vec<f64>,
    /// Saturated equality Z′ = Z^{9/5} + C11.
    pub numeric: Vec<f64>,
    pub numeric_blowup: Option<f64>,
    /// Numeric solution stays at or below the envelope on every sample.
    pub below_envelope: bool,
}

/// [(X0² + a)^{−4/5} − (4/5)t]^{−5/4} − a with a = C11^{5/9}; +∞ at and past the asymptote.
pub fn lifespan_envelope(t: f64, x0sq: f64, c11: f64) -> f64 {
    let a = c11.powf(5.0 / 9.0);
    let base = (x0sq + a).powf(-0.8) - 0.8 * t;
    if base <= 0.0 {
        f64::INFINITY
    } else {
        base.powf(-1.25) - a
    }
}

pub fn lifespan_ode(x0sq: f64, registry: &ConstantsRegistry, samples: usize) -> Result<LifespanReport> {
    if !(x0sq >= 0.0) {
        return Err(LandauError::Input(format!("X0² must be nonnegative, got {x0sq}")));
    }
    let c11 = registry.get("C11");
    if !(c11 > 0.0) {
        return Err(LandauError::Domain(format!("C11 must be positive, got {c11}")));
    }
    let samples = samples.max(2);
    let a = c11.powf(5.0 / 9.0);
    let asymptote = 1.25 * (x0sq + a).powf(-0.8);
    let c7 = registry.get("C7");
    let lifespan = lifespan_value(x0sq, c7);
    // stop just short of the asymptote so the envelope stays finite
    let t_end = 0.999 * asymptote;
    let t: Vec<f64> = (0..samples).map(|i| t_end * i as f64 / (samples - 1) as f64).collect();
    let sol = integrate(
        |_, z: f64| z.max(0.0).powf(1.8) + c11,
        x0sq,
        &t,
        &[],
        Tolerance::default(),
    );
    let numeric_blowup = match sol.outcome {
        Outcome::Blowup(tb) => Some(tb),
        Outcome::Reached => None,
    };
    let envelope: Vec<f64> = sol.times.iter().map(|&s| lifespan_envelope(s, x0sq, c11)).collect();
    let below_envelope = sol
        .values
        .iter()
        .zip(&envelope)
        .all(|(z, e)| *z <= e * (1.0 + 1e-8) + 1e-12);
    Ok(LifespanReport {
        x0sq,
        c11,
        asymptote,
        lifespan,
        c7,
        t: sol.times,
        envelope,
        numeric: sol.values,
        numeric_blowup,
        below_envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_starts_at_data() {
        for x in [0.0, 0.5, 3.0, 40.0] {
            assert!((lifespan_envelope(0.0, x, 1.0) - x).abs() < 1e-12 * (1.0 + x));
        }
    }

    #[test]
    fn asymptote_and_lifespan() {
        let reg = ConstantsRegistry::default();
        let rep = lifespan_ode(3.0, &reg, 200).unwrap();
        assert!((rep.asymptote - 1.25 * 4f64.powf(-0.8)).abs() < 1e-14);
        assert!((rep.lifespan - 1.25 * 5f64.powf(-0.8)).abs() < 1e-14);
        assert!(rep.lifespan < rep.asymptote);
        assert!(rep.below_envelope);
    }
}
