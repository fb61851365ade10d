//! Checks of the two blowup bounds on a trajectory that leaves every bound near T̄.

use serde::Serialize;

use super::integrator::OVERFLOW_GUARD;
use super::master::ScalarTrajectory;
use crate::analytics::{ln_blowup_upper, ConstantsRegistry};
use crate::calibration::INFLATION;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderPoint {
    pub t: f64,
    /// T̄ − t
    pub s: f64,
    pub x: f64,
    pub h: f64,
    /// X(H − H̄)^{5/4}; the lower bound reads ρ ≥ C.
    pub rho: Option<f64>,
    /// inf of X over the samples in [t, T̄)
    pub inf_x: f64,
    /// ln of the upper bound at the calibrated c.
    pub ln_upper: f64,
    /// Share of ln_upper carried by the exponential term of 𝓑.
    pub exp_share: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupLemmaReport {
    pub applicable: bool,
    pub reason: Option<String>,
    pub t_bar: f64,
    pub h_bar: f64,
    pub ladder: Vec<LadderPoint>,
    /// C fitted on the far half of the ladder.
    pub c_lower: Option<f64>,
    /// Violations of X ≥ C(H − H̄)^{−5/4} on the near half.
    pub lower_violations: usize,
    /// c fitted on the far half of the ladder.
    pub c_upper: Option<f64>,
    pub upper_violations: usize,
    /// exp_share at the point closest to T̄.
    pub exp_share_near: f64,
}

impl BlowupLemmaReport {
    fn not_applicable(reason: &str) -> Self {
        BlowupLemmaReport {
            applicable: false,
            reason: Some(reason.into()),
            t_bar: f64::NAN,
            h_bar: f64::NAN,
            ladder: Vec::new(),
            c_lower: None,
            lower_violations: 0,
            c_upper: None,
            upper_violations: 0,
            exp_share_near: f64::NAN,
        }
    }

    pub fn holds(&self) -> bool {
        self.applicable && self.lower_violations == 0 && self.upper_violations == 0
    }
}

fn interp(t: &[f64], y: &[f64], s: f64) -> f64 {
    let i = t.partition_point(|&x| x <= s).clamp(1, t.len() - 1);
    let w = (s - t[i - 1]) / (t[i] - t[i - 1]);
    y[i - 1] + w * (y[i] - y[i - 1])
}

/// Ladder points closer to T̄ than this many times the last sample gap are dropped.
pub const LADDER_MARGIN: f64 = 64.0;

/// Ladder t_j = T̄ − (T̄ − t0)2^{−j}, j = 1..=levels, restricted to the sampled range.
/// Samples at or past T̄ and samples at the overflow guard are ignored.
pub fn blowup_lemma_check(
    traj: &ScalarTrajectory,
    t_bar: Option<f64>,
    registry: &ConstantsRegistry,
    levels: usize,
) -> Result<BlowupLemmaReport> {
    let Some(t_bar) = t_bar.or(traj.blowup) else {
        return Ok(BlowupLemmaReport::not_applicable("trajectory has no blowup"));
    };
    let keep: Vec<usize> = (0..traj.len())
        .filter(|&i| traj.t[i] < t_bar && traj.x2[i] < OVERFLOW_GUARD)
        .collect();
    if keep.len() < 4 {
        return Ok(BlowupLemmaReport::not_applicable("too few samples before the blowup time"));
    }
    let t: Vec<f64> = keep.iter().map(|&i| traj.t[i]).collect();
    let x: Vec<f64> = keep.iter().map(|&i| traj.x2[i].sqrt()).collect();
    let h: Vec<f64> = keep.iter().map(|&i| traj.h[i]).collect();
    let h_bar = *h.last().unwrap();
    let (t0, t_last) = (t[0], *t.last().unwrap());

    let rates = registry.rates()?;
    let (c1, c2, k_sum) = (registry.get("C1"), registry.get("C2"), rates.k1 + rates.k2);

    let mut ladder = Vec::new();
    for j in 1..=levels {
        let s = (t_bar - t0) * 0.5f64.powi(j as i32);
        let tj = t_bar - s;
        // H̄ is the last sampled H, so stay well away from the last sample
        if s < LADDER_MARGIN * (t_bar - t_last) {
            break;
        }
        let xj = interp(&t, &x, tj);
        let hj = interp(&t, &h, tj);
        let inf_x = t
            .iter()
            .zip(&x)
            .filter(|(tt, _)| **tt >= tj)
            .map(|(_, v)| *v)
            .fold(xj, f64::min);
        let rho = (hj > h_bar).then(|| xj * (hj - h_bar).powf(1.25));
        ladder.push(LadderPoint { t: tj, s, x: xj, h: hj, rho, inf_x, ln_upper: f64::NAN, exp_share: f64::NAN });
    }
    if ladder.len() < 4 {
        return Ok(BlowupLemmaReport::not_applicable("ladder too short; sample closer to the blowup time"));
    }
    let half = ladder.len() / 2;
    let (far, near) = ladder.split_at(half);

    // lower bound: calibrate on far half, verify on near half
    let far_rho: Vec<f64> = far.iter().filter_map(|p| p.rho).collect();
    let c_lower = (far_rho.len() == far.len()).then(|| far_rho.iter().copied().fold(f64::INFINITY, f64::min) / INFLATION);
    let lower_violations = match c_lower {
        Some(c) => near.iter().filter(|p| p.rho.map_or(true, |r| r < c)).count(),
        None => near.len(),
    };

    // upper bound: largest c keeping ln U ≥ ln inf X on the far half; the bound decreases in c
    let ok = |c: f64, pts: &[LadderPoint]| pts.iter().all(|p| ln_blowup_upper(p.s, t_bar, c, c1, c2, k_sum) >= p.inf_x.ln());
    let c_upper = if !ok(1e-12, far) {
        None
    } else if ok(1e12, far) {
        Some(1e12)
    } else {
        let (mut lo, mut hi) = (1e-12f64.ln(), 1e12f64.ln());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ok(mid.exp(), far) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo.exp() / INFLATION)
    };
    let cu = c_upper.unwrap_or(f64::NAN);
    for p in ladder.iter_mut() {
        p.ln_upper = ln_blowup_upper(p.s, t_bar, cu, c1, c2, k_sum);
        p.exp_share = (5.0 / 14.0) * 7.0 * (cu * p.s).powf(-450.0 / 14.0) / p.ln_upper;
    }
    let upper_violations = match c_upper {
        Some(_) => ladder[half..].iter().filter(|p| !(p.ln_upper >= p.inf_x.ln())).count(),
        None => ladder.len() - half,
    };
    let exp_share_near = ladder.last().unwrap().exp_share;
    Ok(BlowupLemmaReport {
        applicable: true,
        reason: None,
        t_bar,
        h_bar,
        ladder,
        c_lower,
        lower_violations,
        c_upper,
        upper_violations,
        exp_share_near,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(bounded: bool) -> ScalarTrajectory {
        let t_bar = 1.0;
        let t: Vec<f64> = (0..=40).map(|j| t_bar - 0.5f64.powi(j)).collect();
        let x: Vec<f64> = t
            .iter()
            .map(|s| if bounded { 3.0 } else { 2.0 * (t_bar - s).powf(-1.25) })
            .collect();
        let h: Vec<f64> = t.iter().map(|s| 0.1 + (t_bar - s)).collect();
        let n = t.len();
        let mut tr = ScalarTrajectory::new(t, x.iter().map(|v| v * v).collect(), h, vec![1.0; n]).unwrap();
        tr.blowup = Some(t_bar);
        tr
    }

    #[test]
    fn witness_satisfies_both_bounds() {
        let rep = blowup_lemma_check(&synthetic(false), None, &ConstantsRegistry::default(), 30).unwrap();
        assert!(rep.applicable);
        assert_eq!(rep.lower_violations, 0);
        assert_eq!(rep.upper_violations, 0);
        assert!(rep.exp_share_near > 0.99, "{}", rep.exp_share_near);
    }

    #[test]
    fn bounded_x_is_flagged() {
        let rep = blowup_lemma_check(&synthetic(true), None, &ConstantsRegistry::default(), 30).unwrap();
        assert!(rep.lower_violations > 0);
    }

    #[test]
    fn no_blowup_not_applicable() {
        let t: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let tr = ScalarTrajectory::new(t, vec![1.0; 10], vec![0.0; 10], vec![0.0; 10]).unwrap();
        let rep = blowup_lemma_check(&tr, None, &ConstantsRegistry::default(), 10).unwrap();
        assert!(!rep.applicable);
    }
}
