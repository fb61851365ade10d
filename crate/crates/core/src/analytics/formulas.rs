//! Closed-form exponents, functionals, thresholds, envelopes and blowup bounds.

use serde::{Deserialize, Serialize};

use super::registry::ConstantsRegistry;
use crate::error::{LandauError, Result};

/// q_{ℓ,θ} = −(2ℓ²−25ℓ+57)/(18(ℓ−2))·(1−θ/ℓ) + θ/ℓ.
pub fn decay_exponent(ell: f64, theta: f64) -> Result<f64> {
    if !(ell > 31.0) {
        return Err(LandauError::Domain(format!("moment order must exceed 31, got {ell}")));
    }
    if !(0.0..=ell).contains(&theta) {
        return Err(LandauError::Domain(format!("theta = {theta} outside [0, {ell}]")));
    }
    let a = (2.0 * ell * ell - 25.0 * ell + 57.0) / (18.0 * (ell - 2.0));
    Ok(-a * (1.0 - theta / ell) + theta / ell)
}

/// (k1, k2, k) for moment order ℓ with θ = 15/4 and no safety margin.
///
/// Errors if k2 ≤ 7/2, where the stability theorem does not apply.
pub fn rate_constants(ell: f64) -> Result<(f64, f64, f64)> {
    let reg = ConstantsRegistry {
        ell,
        ..ConstantsRegistry::default()
    };
    let r = reg.rates()?;
    if r.k2 <= 3.5 {
        return Err(LandauError::Domain(format!("k2 = {} does not exceed 7/2", r.k2)));
    }
    Ok((r.k1, r.k2, r.k))
}

/// M = H − (5/2)(X² + B*(1+t)^{1−k2})^{−2/5}.
pub fn monotone_functional(h: f64, x2: f64, t: f64, registry: &ConstantsRegistry) -> Result<f64> {
    let k2 = registry.rates()?.k2;
    Ok(monotone_value(h, x2, t, registry.b_star(), k2))
}

pub(crate) fn monotone_value(h: f64, x2: f64, t: f64, b_star: f64, k2: f64) -> f64 {
    h - 2.5 * (x2 + b_star * (1.0 + t).powf(1.0 - k2)).powf(-0.4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Stable,
    AboveThreshold,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub classification: Regime,
    pub t_star: Option<f64>,
    /// H(0)(X0² + B*)^{2/5}
    pub threshold: f64,
    pub m0: f64,
    pub lifespan: f64,
    /// M(0) ≤ C6/(k+1)((1+𝓣)^{k+1} − 1)
    pub relaxed_ok: bool,
    pub relaxed_rhs: f64,
}

/// T* = ((1+k)/C6·[H0 − (5/2)(X0²+B*)^{−2/5}] + 1)^{1/(k+1)} − 1, clamped at 0.
pub fn t_star(h0: f64, x0sq_plus_b: f64, c6: f64, k: f64) -> f64 {
    let bracket = h0 - 2.5 * x0sq_plus_b.powf(-0.4);
    ((1.0 + k) / c6 * bracket + 1.0).powf(1.0 / (k + 1.0)) - 1.0
}

pub fn classify_regime(h0: f64, x0sq: f64, registry: &ConstantsRegistry) -> Result<RegimeReport> {
    if !(h0 >= 0.0 && x0sq >= 0.0) {
        return Err(LandauError::Domain("H0 and X0² must be nonnegative".into()));
    }
    let rates = registry.rates()?;
    let (b, c6, k) = (registry.b_star(), registry.get("C6"), rates.k);
    let threshold = h0 * (x0sq + b).powf(0.4);
    let m0 = monotone_value(h0, x0sq, 0.0, b, rates.k2);
    let lifespan = local_lifespan(x0sq, registry);
    let relaxed_rhs = c6 / (k + 1.0) * ((1.0 + lifespan).powf(k + 1.0) - 1.0);
    let (classification, t) = if threshold <= 2.5 {
        (Regime::Stable, None)
    } else {
        (Regime::AboveThreshold, Some(t_star(h0, x0sq + b, c6, k).max(0.0)))
    };
    Ok(RegimeReport {
        classification,
        t_star: t,
        threshold,
        m0,
        lifespan,
        relaxed_ok: m0 <= relaxed_rhs,
        relaxed_rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeVariant {
    Stable,
    PostTstar(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Envelope {
    /// Upper bound on ‖h(t)‖_{Ḣ¹}; infinite when unbounded.
    pub bound: f64,
    pub unbounded: bool,
    /// H(t)[X² + B*(1+t)^{1−k2}]^{−2/5}, to be compared with 5/2 (only when X² is supplied).
    pub ceiling: Option<f64>,
}

/// (2/5)^{−5/4}
pub fn envelope_prefactor() -> f64 {
    0.4f64.powf(-1.25)
}

/// Ḣ¹ envelope at time t. `x2` is optional and only feeds the entropy ceiling.
pub fn envelope_bound(
    t: f64,
    h: f64,
    x2: Option<f64>,
    registry: &ConstantsRegistry,
    variant: EnvelopeVariant,
) -> Result<Envelope> {
    let rates = registry.rates()?;
    let (c6, k) = (registry.get("C6"), rates.k);
    let growth = |s: f64| c6 / (k + 1.0) * (1.0 + s).powf(1.0 + k);
    let denom = match variant {
        EnvelopeVariant::Stable => h + growth(t) - growth(0.0),
        EnvelopeVariant::PostTstar(ts) => {
            if t <= ts {
                0.0
            } else {
                growth(t) - growth(ts)
            }
        }
    };
    let ceiling = x2.map(|x2| h * (x2 + registry.b_star() * (1.0 + t).powf(1.0 - rates.k2)).powf(-0.4));
    if denom <= 0.0 {
        return Ok(Envelope { bound: f64::INFINITY, unbounded: true, ceiling });
    }
    Ok(Envelope {
        bound: envelope_prefactor() * denom.powf(-1.25),
        unbounded: false,
        ceiling,
    })
}

/// 𝓣 = (5/4)(X0² + C7^{−1})^{−4/5}.
pub fn local_lifespan(x0sq: f64, registry: &ConstantsRegistry) -> f64 {
    lifespan_value(x0sq, registry.get("C7"))
}

pub(crate) fn lifespan_value(x0sq: f64, c7: f64) -> f64 {
    1.25 * (x0sq + 1.0 / c7).powf(-0.8)
}

/// ln 𝓑(x) = ln C2 − 13 ln x + 7 x^{−450/14}.
pub fn ln_blowup_function(x: f64, c2: f64) -> f64 {
    c2.ln() - 13.0 * x.ln() + 7.0 * x.powf(-450.0 / 14.0)
}

/// 𝓑(x) = C2 x^{−13} exp(7x^{−450/14}); overflows to +∞ quickly for x < 1.
pub fn blowup_function(x: f64, c2: f64) -> f64 {
    ln_blowup_function(x, c2).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlowupBounds {
    /// C(H(t) − H̄)^{−5/4}; None when H(t) ≤ H̄.
    pub lower: Option<f64>,
    /// ln of the upper bound on inf_{[t,T̄]} ‖h‖_{Ḣ¹}.
    pub ln_upper: f64,
    pub upper: f64,
}

/// Lower bound uses `C_lower`, the upper uses `c_upper`, `C1`, `C2` from the registry.
pub fn blowup_bounds(t: f64, t_bar: f64, h: f64, h_bar: f64, registry: &ConstantsRegistry) -> Result<BlowupBounds> {
    if !(t < t_bar) {
        return Err(LandauError::Domain(format!("need t < T̄, got t = {t}, T̄ = {t_bar}")));
    }
    let rates = registry.rates()?;
    let lower = (h > h_bar).then(|| registry.get("C_lower") * (h - h_bar).powf(-1.25));
    let ln_upper = ln_blowup_upper(
        t_bar - t,
        t_bar,
        registry.get("c_upper"),
        registry.get("C1"),
        registry.get("C2"),
        rates.k1 + rates.k2,
    );
    Ok(BlowupBounds { lower, ln_upper, upper: ln_upper.exp() })
}

/// (5/14)[ln 𝓑(c s) + ln(2s/C1) − (k1+k2) ln(1+T̄)] with s = T̄ − t.
pub fn ln_blowup_upper(s: f64, t_bar: f64, c: f64, c1: f64, c2: f64, k_sum: f64) -> f64 {
    (5.0 / 14.0) * (ln_blowup_function(c * s, c2) + (2.0 * s / c1).ln() - k_sum * (1.0 + t_bar).ln())
}

/// √(2H)
pub fn ckp_bound(h: f64) -> Result<f64> {
    if !(h >= 0.0) {
        return Err(LandauError::Domain(format!("entropy must be nonnegative, got {h}")));
    }
    Ok((2.0 * h).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    // 4732/954 is the ratio at ℓ = 55.
    const A55: f64 = 4732.0 / 954.0;

    #[test]
    fn decay_exponent_values() {
        assert!((decay_exponent(55.0, 55.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((decay_exponent(70.0, 70.0).unwrap() - 1.0).abs() < 1e-15);
        let q = -A55 * (1.0 - 24.75 / 55.0) + 24.75 / 55.0;
        assert!((decay_exponent(55.0, 24.75).unwrap() - q).abs() < 1e-14);
        assert!((q + 2.278092243).abs() < 1e-9);
        assert!(-q > 1.75);
        assert!((decay_exponent(55.0, 3.75).unwrap() + 4.553792644).abs() < 1e-8);
        assert!(decay_exponent(55.0, 56.0).is_err());
        assert!(decay_exponent(55.0, -0.1).is_err());
        assert!(decay_exponent(30.0, 1.0).is_err());
    }

    #[test]
    fn rates_at_55() {
        let (k1, k2, k) = rate_constants(55.0).unwrap();
        assert!((k2 - 4.556184486).abs() < 1e-8);
        assert!((k1 - 3.643034115).abs() < 1e-8);
        assert!((k - 0.422473795).abs() < 1e-8);
        assert!(((2.0 * k2 - 7.0) / 5.0 - (0.4 * k2 - 1.4)).abs() < 1e-14);
        let k3 = ConstantsRegistry::default().rates().unwrap().k3;
        assert!(k3 > 3.0 && k3 < 3.1, "{k3}");
    }

    #[test]
    fn functional_examples() {
        let mut r = ConstantsRegistry::default();
        let b = r.b_star();
        assert!((monotone_functional(0.0, 0.0, 0.0, &r).unwrap() + 2.5 * b.powf(-0.4)).abs() < 1e-15);
        // threshold equality: H (X² + B*)^{2/5} = 5/2
        let h = 2.5 * (3.0 + b).powf(-0.4);
        assert!(monotone_functional(h, 3.0, 0.0, &r).unwrap().abs() < 1e-14);
        r.set("B_star", 1.0, super::super::Provenance::User).unwrap();
        let m = monotone_value(1.0, 3.0, 0.0, 1.0, 4.0);
        assert!((m + 0.435872944).abs() < 1e-8);
    }

    #[test]
    fn tstar_examples() {
        assert!((t_star(10.0, 1.0, 1.0, 0.2) - (10f64.powf(1.0 / 1.2) - 1.0)).abs() < 1e-12);
        assert!((t_star(10.0, 1.0, 1.0, 0.2) - 5.812920691).abs() < 1e-8);
        let r = ConstantsRegistry::default();
        let b = r.b_star();
        let h = 2.5 * (2.0 + b).powf(-0.4);
        assert!(t_star(h, 2.0 + b, r.get("C6"), 0.4).abs() < 1e-12);
        assert_eq!(classify_regime(0.0, 5.0, &r).unwrap().classification, Regime::Stable);
        let above = classify_regime(10.0, 5.0, &r).unwrap();
        assert_eq!(above.classification, Regime::AboveThreshold);
        assert!(above.t_star.unwrap() > 0.0);
    }

    #[test]
    fn envelope_examples() {
        assert!((envelope_prefactor() - 3.143583574).abs() < 1e-8);
        let r = ConstantsRegistry::default();
        let e = envelope_bound(0.0, 0.3, None, &r, EnvelopeVariant::Stable).unwrap();
        assert_eq!(e.bound, envelope_prefactor() * 0.3f64.powf(-1.25));
        let near = envelope_bound(2.0 + 1e-9, 0.0, None, &r, EnvelopeVariant::PostTstar(2.0)).unwrap();
        assert!(near.bound > 1e8);
        let at = envelope_bound(2.0, 0.0, None, &r, EnvelopeVariant::PostTstar(2.0)).unwrap();
        assert!(at.unbounded);
    }

    #[test]
    fn lifespan_examples() {
        assert!((lifespan_value(0.0, 1.0) - 1.25).abs() < 1e-15);
        // (5/4)·4^{-4/5}
        assert!((lifespan_value(3.0, 1.0) - 0.412346222).abs() < 1e-8);
        assert!(lifespan_value(2.0, 1.0) < lifespan_value(1.0, 1.0));
    }

    #[test]
    fn blowup_function_values() {
        assert!((blowup_function(1.0, 1.0) / 1096.633158428 - 1.0).abs() < 1e-9);
        let xs: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
        for w in xs.windows(2) {
            assert!(ln_blowup_function(w[0], 1.0) > ln_blowup_function(w[1], 1.0));
        }
        // s = 0.5, c = C1 = C2 = 1, T̄ = 1, k1 + k2 = 5
        let ln_b = 13.0 * 2f64.ln() + 7.0 * 2f64.powf(450.0 / 14.0);
        let expect = 5.0 / 14.0 * (ln_b + 1f64.ln() - 5.0 * 2f64.ln());
        let got = ln_blowup_upper(0.5, 1.0, 1.0, 1.0, 1.0, 5.0);
        assert!((got / expect - 1.0).abs() < 1e-12);
        assert!(got > 1e9);
    }

    #[test]
    fn ckp() {
        assert_eq!(ckp_bound(0.0).unwrap(), 0.0);
        assert!((ckp_bound(2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(ckp_bound(-1.0).is_err());
    }
}
