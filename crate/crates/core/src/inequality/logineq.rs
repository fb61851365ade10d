//! |a log a − b log b| ≤ C_p|a−b|^{1/p} + |a−b|log⁺|a−b| + 2√(a∧b)√|a−b|.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::IneqReport;
use crate::error::{LandauError, Result};

/// C_p = p/(e(p−1))
pub fn log_constant(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(LandauError::Domain(format!("log inequality needs p > 1, got {p}")));
    }
    Ok(p / (std::f64::consts::E * (p - 1.0)))
}

fn xlogx(x: f64) -> f64 {
    if x == 0.0 { 0.0 } else { x * x.ln() }
}

/// (lhs, rhs) for one triple.
pub fn log_sides(a: f64, b: f64, p: f64) -> Result<(f64, f64)> {
    if !(a >= 0.0 && b >= 0.0) {
        return Err(LandauError::Domain(format!("need a, b >= 0, got {a}, {b}")));
    }
    let cp = log_constant(p)?;
    let d = (a - b).abs();
    let logp = if d >= 1.0 { d.ln() } else { 0.0 };
    let lhs = (xlogx(a) - xlogx(b)).abs();
    let rhs = cp * d.powf(1.0 / p) + d * logp + 2.0 * a.min(b).sqrt() * d.sqrt();
    Ok((lhs, rhs))
}

/// Slack for roundoff: relative to the size of the individual terms.
const LOG_SLACK: f64 = 1e-12;

pub fn check_log_inequality(samples: &[(f64, f64, f64)]) -> Result<IneqReport> {
    let mut violations = 0;
    let mut worst = 0.0f64;
    for &(a, b, p) in samples {
        let (l, r) = log_sides(a, b, p)?;
        let scale = xlogx(a).abs() + xlogx(b).abs() + r;
        if l > r + LOG_SLACK * scale {
            violations += 1;
        }
        if r > 0.0 {
            worst = worst.max(l / r);
        }
    }
    Ok(IneqReport { id: "log_inequality".into(), trials: samples.len(), violations, worst_ratio: worst, fit: None })
}

/// Half the triples uniform on [0, a_max]², half log-uniform on [1e-12, a_max]²; p uniform on (1, 5].
pub fn log_samples(n: usize, a_max: f64, seed: u64) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = ((1e-12f64).ln(), a_max.ln());
    (0..n)
        .map(|i| {
            let (a, b) = if i % 2 == 0 {
                (rng.gen_range(0.0..=a_max), rng.gen_range(0.0..=a_max))
            } else {
                (rng.gen_range(lo..hi).exp(), rng.gen_range(lo..hi).exp())
            };
            // (1, 5]: 1 excluded
            let p = 5.0 - rng.gen_range(0.0..4.0);
            (a, b, p)
        })
        .collect()
}
