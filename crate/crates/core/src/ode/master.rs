//! The master inequality for X² = ‖h‖²_{Ḣ¹}, integrated as an equality, and the monotone functional along it.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::integrator::{integrate, Outcome, Tolerance};
use crate::analytics::formulas::monotone_value;
use crate::analytics::{classify_regime, envelope_bound, ConstantsRegistry, EnvelopeVariant, Regime, RegimeReport};
use crate::error::{LandauError, Result};

/// Entropy as a function of time; D = −H′.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HProfile {
    Constant { h: f64 },
    /// H = h0 exp(−rate·t)
    Exponential { h0: f64, rate: f64 },
    /// Piecewise linear through (t, h); constant after the last node.
    Table { t: Vec<f64>, h: Vec<f64> },
}

impl HProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            HProfile::Constant { h } if *h >= 0.0 => Ok(()),
            HProfile::Exponential { h0, rate } if *h0 >= 0.0 && *rate >= 0.0 => Ok(()),
            HProfile::Table { t, h } => {
                if t.len() != h.len() || t.len() < 2 {
                    return Err(LandauError::Input("H table needs at least two (t, h) nodes of equal length".into()));
                }
                if t.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(LandauError::Input("H table times must increase".into()));
                }
                if h.windows(2).any(|w| w[1] > w[0]) {
                    return Err(LandauError::Input("H profile must be nonincreasing".into()));
                }
                if h.iter().any(|x| !(*x >= 0.0)) {
                    return Err(LandauError::Input("H profile must be nonnegative".into()));
                }
                Ok(())
            }
            _ => Err(LandauError::Input(format!("invalid H profile {self:?}"))),
        }
    }

    pub fn h(&self, s: f64) -> f64 {
        match self {
            HProfile::Constant { h } => *h,
            HProfile::Exponential { h0, rate } => h0 * (-rate * s).exp(),
            HProfile::Table { t, h } => {
                if s <= t[0] {
                    return h[0];
                }
                let i = t.partition_point(|&x| x <= s);
                if i >= t.len() {
                    return *h.last().unwrap();
                }
                let w = (s - t[i - 1]) / (t[i] - t[i - 1]);
                h[i - 1] + w * (h[i] - h[i - 1])
            }
        }
    }

    /// −H′ (right derivative at table nodes).
    pub fn d(&self, s: f64) -> f64 {
        match self {
            HProfile::Constant { .. } => 0.0,
            HProfile::Exponential { h0, rate } => rate * h0 * (-rate * s).exp(),
            HProfile::Table { t, h } => {
                if s < t[0] {
                    return 0.0;
                }
                let i = t.partition_point(|&x| x <= s);
                if i >= t.len() {
                    return 0.0;
                }
                -(h[i] - h[i - 1]) / (t[i] - t[i - 1])
            }
        }
    }

    pub fn breaks(&self) -> Vec<f64> {
        match self {
            HProfile::Table { t, .. } => t.clone(),
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarTrajectory {
    pub t: Vec<f64>,
    /// X² samples
    pub x2: Vec<f64>,
    pub h: Vec<f64>,
    pub d: Vec<f64>,
    /// Blowup time when the trajectory ended at the overflow guard.
    pub blowup: Option<f64>,
    /// Estimated local error of the integrator, if produced by one.
    pub error_estimate: f64,
}

impl ScalarTrajectory {
    pub fn new(t: Vec<f64>, x2: Vec<f64>, h: Vec<f64>, d: Vec<f64>) -> Result<Self> {
        let n = t.len();
        if x2.len() != n || h.len() != n || d.len() != n {
            return Err(LandauError::Input("trajectory columns differ in length".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(LandauError::Input("trajectory times must increase strictly".into()));
        }
        if x2.iter().any(|x| !(*x >= 0.0)) {
            return Err(LandauError::Input("X² must be nonnegative".into()));
        }
        Ok(ScalarTrajectory { t, x2, h, d, blowup: None, error_estimate: 0.0 })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// CSV with columns `t,X2,H,D,M,lhs,rhs` where lhs/rhs are the two sides of the master inequality
    /// (dX²/dt by centered differences, one-sided at the ends).
    pub fn write_csv<W: Write>(&self, mut w: W, registry: &ConstantsRegistry) -> Result<()> {
        let rates = registry.rates()?;
        let (c1, b) = (registry.get("C1"), registry.b_star());
        writeln!(w, "t,X2,H,D,M,lhs,rhs")?;
        let n = self.len();
        for i in 0..n {
            let dz = if n < 2 {
                0.0
            } else if i == 0 {
                (self.x2[1] - self.x2[0]) / (self.t[1] - self.t[0])
            } else if i == n - 1 {
                (self.x2[n - 1] - self.x2[n - 2]) / (self.t[n - 1] - self.t[n - 2])
            } else {
                (self.x2[i + 1] - self.x2[i - 1]) / (self.t[i + 1] - self.t[i - 1])
            };
            let t = self.t[i];
            let p = self.x2[i].powf(1.4);
            let lhs = dz + c1 * (1.0 + t).powf(rates.k1) * p;
            let rhs = self.d[i] * p + b * (1.0 + t).powf(-rates.k2);
            let m = monotone_value(self.h[i], self.x2[i], t, b, rates.k2);
            let cells = [t, self.x2[i], self.h[i], self.d[i], m, lhs, rhs];
            let row: Vec<String> = cells.iter().map(|v| crate::solver::fmt_num(*v)).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MasterParams {
    pub x0: f64,
    pub profile: HProfile,
    pub t_end: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
}

fn default_samples() -> usize {
    201
}

fn default_rtol() -> f64 {
    1e-10
}

/// Z′ = D(t) Z^{7/5} + B*(1+t)^{−k2} − C1(1+t)^{k1} Z^{7/5}, Z = X².
pub fn integrate_master(params: &MasterParams, registry: &ConstantsRegistry) -> Result<ScalarTrajectory> {
    params.profile.validate()?;
    if !(params.x0 >= 0.0) {
        return Err(LandauError::Input(format!("X0 must be nonnegative, got {}", params.x0)));
    }
    if !(params.t_end > 0.0) || params.samples < 2 {
        return Err(LandauError::Input("need t_end > 0 and at least two samples".into()));
    }
    let prof = &params.profile;
    let outputs: Vec<f64> = (0..params.samples)
        .map(|i| params.t_end * i as f64 / (params.samples - 1) as f64)
        .collect();
    integrate_master_at(params.x0, prof, &outputs, params.rtol, registry)
}

/// Same equation reported at explicit output times (increasing, starting at 0).
pub fn integrate_master_at(
    x0: f64,
    prof: &HProfile,
    outputs: &[f64],
    rtol: f64,
    registry: &ConstantsRegistry,
) -> Result<ScalarTrajectory> {
    prof.validate()?;
    if outputs.len() < 2 || outputs[0] != 0.0 || outputs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(LandauError::Input("output times must increase from 0".into()));
    }
    let rates = registry.rates()?;
    let (c1, b) = (registry.get("C1"), registry.b_star());
    let rhs = |t: f64, z: f64| {
        let p = z.max(0.0).powf(1.4);
        prof.d(t) * p + b * (1.0 + t).powf(-rates.k2) - c1 * (1.0 + t).powf(rates.k1) * p
    };
    let tol = Tolerance { rtol, ..Tolerance::default() };
    let sol = integrate(rhs, x0 * x0, outputs, &prof.breaks(), tol);
    let h: Vec<f64> = sol.times.iter().map(|&t| prof.h(t)).collect();
    let d: Vec<f64> = sol.times.iter().map(|&t| prof.d(t)).collect();
    let mut times = sol.times;
    // the blowup sample can coincide with the previous output time only in degenerate cases
    for i in 1..times.len() {
        if times[i] <= times[i - 1] {
            times[i] = times[i - 1] * (1.0 + 1e-15) + 1e-300;
        }
    }
    let mut traj = ScalarTrajectory::new(times, sol.values, h, d)?;
    traj.blowup = match sol.outcome {
        Outcome::Blowup(tb) => Some(tb),
        Outcome::Reached => None,
    };
    traj.error_estimate = sol.max_error;
    Ok(traj)
}

/// Blowup time corrected past the guard crossing: near blowup Z′ ≈ aZ^{7/5} with
/// a = D − C1(1+t)^{k1}, which leaves Z^{−2/5}/(2a/5) to go. None without blowup or with a ≤ 0.
pub fn extrapolate_blowup(traj: &ScalarTrajectory, registry: &ConstantsRegistry) -> Result<Option<f64>> {
    let Some(tg) = traj.blowup else { return Ok(None) };
    let rates = registry.rates()?;
    let i = traj.len() - 1;
    let a = traj.d[i] - registry.get("C1") * (1.0 + tg).powf(rates.k1);
    if !(a > 0.0) {
        return Ok(None);
    }
    Ok(Some(tg + traj.x2[i].powf(-0.4) / (0.4 * a)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub t1: f64,
    pub t2: f64,
    /// M(t2) + C6∫(1+t)^k − M(t1)
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub intervals: usize,
    pub c6: f64,
    pub k: f64,
    pub violations: Vec<Violation>,
    /// Largest value of the excess over all intervals (negative when all hold).
    pub max_excess: f64,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Minimum number of samples for the check.
pub const MIN_SAMPLES: usize = 50;

/// M(t2) + C6∫_{t1}^{t2}(1+t)^k dt ≤ M(t1) on every consecutive sample interval.
pub fn verify_monotonicity(traj: &ScalarTrajectory, registry: &ConstantsRegistry) -> Result<MonotonicityReport> {
    check_monotone_samples(&traj.t, &traj.h, &traj.x2, registry, registry.get("C6"))
}

/// The same check on raw columns with an explicit C6.
pub fn check_monotone_samples(
    t: &[f64],
    h: &[f64],
    x2: &[f64],
    registry: &ConstantsRegistry,
    c6: f64,
) -> Result<MonotonicityReport> {
    if t.len() < MIN_SAMPLES {
        return Err(LandauError::Resolution(format!(
            "monotonicity check needs at least {MIN_SAMPLES} samples, got {}",
            t.len()
        )));
    }
    let rates = registry.rates()?;
    let (b, k) = (registry.b_star(), rates.k);
    let m: Vec<f64> = (0..t.len()).map(|i| monotone_value(h[i], x2[i], t[i], b, rates.k2)).collect();
    let mut violations = Vec::new();
    let mut max_excess = f64::NEG_INFINITY;
    for i in 0..t.len() - 1 {
        let integral = ((1.0 + t[i + 1]).powf(k + 1.0) - (1.0 + t[i]).powf(k + 1.0)) / (k + 1.0);
        let excess = m[i + 1] + c6 * integral - m[i];
        let tol = 1e-9 * (m[i].abs() + m[i + 1].abs() + c6 * integral).max(1e-300);
        max_excess = max_excess.max(excess);
        if excess > tol {
            violations.push(Violation { t1: t[i], t2: t[i + 1], excess });
        }
    }
    Ok(MonotonicityReport { intervals: t.len() - 1, c6, k, violations, max_excess })
}

/// Largest C6 for which every interval holds, divided by `slack`. None if M increases somewhere.
pub fn calibrate_c6(t: &[f64], h: &[f64], x2: &[f64], registry: &ConstantsRegistry, slack: f64) -> Result<Option<f64>> {
    let rates = registry.rates()?;
    let (b, k) = (registry.b_star(), rates.k);
    let m: Vec<f64> = (0..t.len()).map(|i| monotone_value(h[i], x2[i], t[i], b, rates.k2)).collect();
    let mut best = f64::INFINITY;
    for i in 0..t.len().saturating_sub(1) {
        let integral = ((1.0 + t[i + 1]).powf(k + 1.0) - (1.0 + t[i]).powf(k + 1.0)) / (k + 1.0);
        let drop = m[i] - m[i + 1];
        if drop <= 0.0 {
            return Ok(None);
        }
        best = best.min(drop / integral);
    }
    Ok(best.is_finite().then_some(best / slack))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchPrediction {
    pub regime: RegimeReport,
    pub t: Vec<f64>,
    /// Envelope on X at each time; +∞ where none is available.
    pub envelope: Vec<f64>,
}

/// Envelope curves on the sampled times, using the stable or post-T* branch.
pub fn branch_predict(
    x0sq: f64,
    profile: &HProfile,
    times: &[f64],
    registry: &ConstantsRegistry,
) -> Result<BranchPrediction> {
    profile.validate()?;
    let regime = classify_regime(profile.h(0.0), x0sq, registry)?;
    let variant = match regime.classification {
        Regime::Stable => EnvelopeVariant::Stable,
        Regime::AboveThreshold => EnvelopeVariant::PostTstar(regime.t_star.unwrap_or(0.0)),
    };
    let envelope = times
        .iter()
        .map(|&t| envelope_bound(t, profile.h(t), None, registry, variant).map(|e| e.bound))
        .collect::<Result<Vec<_>>>()?;
    Ok(BranchPrediction { regime, t: times.to_vec(), envelope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::Provenance;

    fn reg() -> ConstantsRegistry {
        ConstantsRegistry::default()
    }

    #[test]
    fn pure_damping_decreases() {
        let mut r = reg();
        r.set("B_star", 0.0, Provenance::User).unwrap();
        let p = MasterParams { x0: 2.0, profile: HProfile::Constant { h: 0.0 }, t_end: 5.0, samples: 101, rtol: 1e-10 };
        let tr = integrate_master(&p, &r).unwrap();
        assert!(tr.x2.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn zero_data_self_convergence() {
        let r = reg();
        let base = MasterParams { x0: 0.0, profile: HProfile::Constant { h: 0.0 }, t_end: 4.0, samples: 41, rtol: 1e-9 };
        let a = integrate_master(&base, &r).unwrap();
        let b = integrate_master(&MasterParams { rtol: 1e-12, ..base }, &r).unwrap();
        for (x, y) in a.x2.iter().zip(&b.x2) {
            assert!((x - y).abs() <= 1e-8 * y.abs().max(1e-300) + 1e-14, "{x} {y}");
        }
        assert!(a.x2[1] > 0.0);
    }

    #[test]
    fn master_trajectories_are_monotone() {
        let r = reg();
        let p = MasterParams {
            x0: 1.5,
            profile: HProfile::Exponential { h0: 0.5, rate: 0.7 },
            t_end: 10.0,
            samples: 201,
            rtol: 1e-10,
        };
        let tr = integrate_master(&p, &r).unwrap();
        let rep = verify_monotonicity(&tr, &r).unwrap();
        assert!(rep.holds(), "{:?}", rep.violations.first());
    }

    #[test]
    fn forced_increase_is_flagged() {
        let r = reg();
        let t: Vec<f64> = (0..60).map(|i| i as f64 * 0.1).collect();
        // constant X, rising H
        let h: Vec<f64> = t.iter().map(|s| 0.2 + s).collect();
        let tr = ScalarTrajectory::new(t.clone(), vec![0.01; 60], h, vec![0.0; 60]).unwrap();
        let rep = verify_monotonicity(&tr, &r).unwrap();
        assert!(!rep.holds());
        let short = ScalarTrajectory::new(t[..10].to_vec(), vec![0.0; 10], vec![0.0; 10], vec![0.0; 10]).unwrap();
        assert!(matches!(verify_monotonicity(&short, &r), Err(LandauError::Resolution(_))));
    }

    #[test]
    fn nonmonotone_profile_rejected() {
        let p = MasterParams {
            x0: 1.0,
            profile: HProfile::Table { t: vec![0.0, 1.0], h: vec![0.1, 0.2] },
            t_end: 1.0,
            samples: 10,
            rtol: 1e-10,
        };
        assert!(matches!(integrate_master(&p, &reg()), Err(LandauError::Input(_))));
    }

    #[test]
    fn comparison_principle() {
        let r = reg();
        let ta = vec![0.0, 1.0, 2.0, 4.0];
        let ha = vec![1.0, 0.6, 0.5, 0.45];
        let hb: Vec<f64> = ta.iter().zip(&ha).map(|(t, h)| h - 0.05 * t).collect();
        let run = |h: Vec<f64>| {
            integrate_master(
                &MasterParams { x0: 1.0, profile: HProfile::Table { t: ta.clone(), h }, t_end: 4.0, samples: 81, rtol: 1e-10 },
                &r,
            )
            .unwrap()
        };
        let (a, b) = (run(ha.clone()), run(hb));
        assert!(a.x2.iter().zip(&b.x2).all(|(x, y)| y >= &(x * (1.0 - 1e-9))));
    }
}
