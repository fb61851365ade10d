//! Adaptive scalar RK4 (step doubling) with breakpoints and event localization.

/// Z above this is treated as blowup.
pub const OVERFLOW_GUARD: f64 = 1e12;

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: 1e-10,
            atol: 1e-300,
            h_min: 1e-14,
        }
    }
}

fn rk4<F: Fn(f64, f64) -> f64>(f: &F, t: f64, z: f64, h: f64) -> f64 {
    let k1 = f(t, z);
    let k2 = f(t + 0.5 * h, z + 0.5 * h * k1);
    let k3 = f(t + 0.5 * h, z + 0.5 * h * k2);
    // the last stage stays inside the step so right-continuous data at a breakpoint is not sampled
    let k4 = f(t + h * (1.0 - 1e-13), z + h * k3);
    z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Reached,
    /// Time at which Z crossed the overflow guard.
    Blowup(f64),
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub outcome: Outcome,
    /// Largest local error estimate accepted.
    pub max_error: f64,
    pub steps: usize,
}

/// Integrate z' = f(t, z), z ≥ 0 enforced, reporting z at `outputs` (increasing, starting at t0).
///
/// Steps never cross an entry of `breaks`. Integration stops at the first time z exceeds
/// the guard, located by bisection to `1e-6` relative accuracy in time.
pub fn integrate<F: Fn(f64, f64) -> f64>(
    f: F,
    z0: f64,
    outputs: &[f64],
    breaks: &[f64],
    tol: Tolerance,
) -> Solution {
    let clamp = |z: f64| z.max(0.0);
    let mut times = vec![outputs[0]];
    let mut values = vec![z0];
    let mut t = outputs[0];
    let mut z = z0;
    let mut h = ((outputs.last().unwrap() - t) / 100.0).max(tol.h_min);
    let mut max_error: f64 = 0.0;
    let mut steps = 0;
    for &target in &outputs[1..] {
        while t < target {
            let next_break = breaks
                .iter()
                .copied()
                .filter(|&b| b > t * (1.0 + 1e-15) + 1e-300 && b < target)
                .fold(target, f64::min);
            let mut hs = h.min(next_break - t);
            loop {
                let full = clamp(rk4(&f, t, z, hs));
                let half = clamp(rk4(&f, t, z, 0.5 * hs));
                let two = clamp(rk4(&f, t + 0.5 * hs, half, 0.5 * hs));
                let err = (two - full).abs() / 15.0;
                let scale = tol.atol + tol.rtol * two.abs().max(z.abs());
                if err <= scale || hs <= tol.h_min || !two.is_finite() {
                    if two > OVERFLOW_GUARD || !two.is_finite() {
                        let tb = bisect_blowup(&f, t, z, hs);
                        times.push(tb);
                        values.push(OVERFLOW_GUARD);
                        return Solution { times, values, outcome: Outcome::Blowup(tb), max_error, steps };
                    }
                    max_error = max_error.max(err);
                    t += hs;
                    if (next_break - t).abs() <= 1e-14 * next_break.abs().max(1.0) {
                        t = next_break;
                    }
                    z = two + (two - full) / 15.0;
                    z = clamp(z);
                    steps += 1;
                    let grow = if err > 0.0 { (scale / err).powf(0.2).clamp(0.2, 4.0) * 0.9 } else { 4.0 };
                    h = hs * grow;
                    break;
                }
                hs *= ((scale / err).powf(0.2) * 0.9).clamp(0.1, 0.5);
            }
        }
        times.push(target);
        values.push(z);
    }
    Solution { times, values, outcome: Outcome::Reached, max_error, steps }
}

/// Earliest τ in (0, h] with z(t + τ) > guard, using a single RK4 step of size τ from (t, z).
fn bisect_blowup<F: Fn(f64, f64) -> f64>(f: &F, t: f64, z: f64, h: f64) -> f64 {
    let over = |tau: f64| {
        let mut zz = z;
        // a few substeps keep the trial accurate near the singularity
        let n = 8;
        for i in 0..n {
            zz = rk4(f, t + tau * i as f64 / n as f64, zz.max(0.0), tau / n as f64);
            if !zz.is_finite() || zz > OVERFLOW_GUARD {
                return true;
            }
        }
        false
    };
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..200 {
        if hi - lo <= 1e-7 * (t + hi).abs().max(1e-12) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if over(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    t + hi
}
