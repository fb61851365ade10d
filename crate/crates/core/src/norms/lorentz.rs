//! Decreasing rearrangements and Lorentz norms in closed form on step profiles.

use crate::error::{LandauError, Result};
use crate::grid::Field;
use crate::quad::gauss_legendre;

/// f* of a grid field as a step function: `levels[k]` on `[cum[k], cum[k+1])`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepProfile {
    levels: Vec<f64>,
    measures: Vec<f64>,
    cum: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LorentzFlavor {
    /// (∫ (t^{1/p} f*(t))^q dt/t)^{1/q}
    Starred,
    /// (∫ (t^{1/p} f**(t))^q dt/t)^{1/q}
    Maximal,
}

/// Rearrangement of |f|⟨v⟩^l. Zero cells carry no step.
pub fn rearrange(f: &Field, l: f64) -> StepProfile {
    let g = f.grid();
    let cell = g.cell_volume();
    let mut vals: Vec<f64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, x)| if l == 0.0 { x.abs() } else { x.abs() * g.bracket(i).powf(l) })
        .filter(|x| *x > 0.0)
        .collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    let mut levels: Vec<f64> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for x in vals {
        if levels.last() == Some(&x) {
            *counts.last_mut().expect("nonempty") += 1;
        } else {
            levels.push(x);
            counts.push(1);
        }
    }
    let measures: Vec<f64> = counts.iter().map(|&c| c as f64 * cell).collect();
    StepProfile::from_parts(levels, measures)
}

impl StepProfile {
    fn from_parts(levels: Vec<f64>, measures: Vec<f64>) -> Self {
        let mut cum = Vec::with_capacity(levels.len() + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for m in &measures {
            acc += m;
            cum.push(acc);
        }
        StepProfile { levels, measures, cum }
    }

    /// Builds a profile from (level, measure) pairs with strictly decreasing positive levels.
    pub fn new(steps: &[(f64, f64)]) -> Result<Self> {
        for w in steps.windows(2) {
            if !(w[0].0 > w[1].0) {
                return Err(LandauError::Input("profile levels must strictly decrease".into()));
            }
        }
        if steps.iter().any(|&(y, m)| !(y > 0.0) || !(m > 0.0)) {
            return Err(LandauError::Input("profile levels and measures must be positive".into()));
        }
        Ok(Self::from_parts(
            steps.iter().map(|s| s.0).collect(),
            steps.iter().map(|s| s.1).collect(),
        ))
    }

    pub fn steps(&self) -> Vec<(f64, f64)> {
        self.levels.iter().copied().zip(self.measures.iter().copied()).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn total_measure(&self) -> f64 {
        *self.cum.last().expect("cum has a leading zero")
    }

    /// a_f(y) = |{|f| > y}|.
    pub fn distribution(&self, y: f64) -> f64 {
        let k = self.levels.partition_point(|&x| x > y);
        self.cum[k]
    }

    /// f*(s), right-continuous.
    pub fn f_star(&self, s: f64) -> f64 {
        let k = self.cum.partition_point(|&c| c <= s);
        if k == 0 || k > self.levels.len() {
            0.0
        } else {
            self.levels[k - 1]
        }
    }

    /// f**(t) = (1/t) ∫₀ᵗ f*.
    pub fn f_star_star(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.levels.first().copied().unwrap_or(0.0);
        }
        let mut acc = 0.0;
        for (k, &y) in self.levels.iter().enumerate() {
            let (a, b) = (self.cum[k], self.cum[k + 1]);
            if t <= a {
                break;
            }
            acc += y * (t.min(b) - a);
        }
        acc / t
    }

    /// (∫ (f*)^p ds)^{1/p}.
    pub fn lp(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.levels.first().copied().unwrap_or(0.0);
        }
        let s: f64 = self.levels.iter().zip(&self.measures).map(|(y, m)| y.powf(p) * m).sum();
        s.powf(1.0 / p)
    }

    pub fn lorentz(&self, p: f64, q: f64, flavor: LorentzFlavor) -> Result<f64> {
        check_exponents(p, q)?;
        if self.is_empty() {
            return Ok(0.0);
        }
        Ok(match flavor {
            LorentzFlavor::Starred => self.starred(p, q),
            LorentzFlavor::Maximal => self.maximal(p, q),
        })
    }

    fn starred(&self, p: f64, q: f64) -> f64 {
        if q.is_infinite() {
            if p.is_infinite() {
                return self.levels[0];
            }
            return self
                .levels
                .iter()
                .zip(&self.cum[1..])
                .map(|(y, s)| y * s.powf(1.0 / p))
                .fold(0.0, f64::max);
        }
        let e = q / p;
        let s: f64 = self
            .levels
            .iter()
            .enumerate()
            .map(|(k, y)| y.powf(q) * (self.cum[k + 1].powf(e) - self.cum[k].powf(e)) / e)
            .sum();
        s.powf(1.0 / q)
    }

    /// On step k, f**(t) = y_k + β_k/t with β_k = ∫₀^{s_k} f* − y_k s_k; past the support, β/t.
    fn segments(&self) -> Vec<(f64, f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.levels.len() + 1);
        let mut mass = 0.0;
        for (k, &y) in self.levels.iter().enumerate() {
            let a = self.cum[k];
            out.push((a, self.cum[k + 1], y, mass - y * a));
            mass += y * self.measures[k];
        }
        out.push((self.total_measure(), f64::INFINITY, 0.0, mass));
        out
    }

    fn maximal(&self, p: f64, q: f64) -> f64 {
        let segs = self.segments();
        if q.is_infinite() {
            if p.is_infinite() {
                return self.levels[0];
            }
            let r = 1.0 / p;
            let val = |t: f64, y: f64, beta: f64| y * t.powf(r) + beta * t.powf(r - 1.0);
            let mut best: f64 = 0.0;
            for &(a, b, y, beta) in &segs {
                if b.is_finite() {
                    best = best.max(val(b, y, beta));
                } else if p == 1.0 {
                    best = best.max(beta);
                }
                if a > 0.0 {
                    best = best.max(val(a, y, beta));
                }
                if y > 0.0 && p > 1.0 {
                    let tc = beta * (p - 1.0) / y;
                    if tc > a && tc < b {
                        best = best.max(val(tc, y, beta));
                    }
                }
            }
            return best;
        }
        let integer_q = q.fract() == 0.0 && q <= 16.0;
        let rule = gauss_legendre(24);
        let mut total = 0.0;
        for &(a, b, y, beta) in &segs {
            total += if b.is_infinite() {
                // ∫_a^∞ β^q t^{q/p - q - 1} dt
                beta.powf(q) * a.powf(q / p - q) / (q - q / p)
            } else if beta == 0.0 {
                y.powf(q) * (b.powf(q / p) - a.powf(q / p)) * p / q
            } else if integer_q {
                binomial_segment(a, b, y, beta, p, q as u32)
            } else {
                // smooth on [a, b] with a > 0
                let (lo, hi) = (a.ln(), b.ln());
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                rule.0
                    .iter()
                    .zip(&rule.1)
                    .map(|(x, w)| {
                        let t = (mid + half * x).exp();
                        w * (t.powf(1.0 / p) * (y + beta / t)).powf(q)
                    })
                    .sum::<f64>()
                    * half
            };
        }
        total.powf(1.0 / q)
    }
}

/// ∫_a^b t^{q/p - 1} (y + β/t)^q dt for integer q, expanded binomially.
fn binomial_segment(a: f64, b: f64, y: f64, beta: f64, p: f64, q: u32) -> f64 {
    let mut s = 0.0;
    let mut binom = 1.0;
    for m in 0..=q {
        let e = q as f64 / p - m as f64;
        let piece = if e.abs() < 1e-14 { (b / a).ln() } else { (b.powf(e) - a.powf(e)) / e };
        s += binom * y.powi((q - m) as i32) * beta.powi(m as i32) * piece;
        binom = binom * (q - m) as f64 / (m + 1) as f64;
    }
    s
}

fn check_exponents(p: f64, q: f64) -> Result<()> {
    let ok = if p > 1.0 && p.is_finite() {
        q >= 1.0
    } else {
        (p == 1.0 || p.is_infinite()) && q.is_infinite()
    };
    if ok {
        Ok(())
    } else {
        Err(LandauError::Domain(format!("unsupported Lorentz exponents p={p}, q={q}")))
    }
}

/// ‖f⟨v⟩^l‖ in L^{p,q}.
pub fn lorentz_norm(f: &Field, p: f64, q: f64, l: f64, flavor: LorentzFlavor) -> Result<f64> {
    check_exponents(p, q)?;
    rearrange(f, l).lorentz(p, q, flavor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use std::f64::consts::PI;

    #[test]
    fn two_level_profile() {
        let g = build_grid(2.0, 8).unwrap(); // cell volume 1/8
        let mut v = vec![0.0; g.len()];
        for x in v.iter_mut().take(8) {
            *x = 2.0;
        }
        for x in v.iter_mut().skip(8).take(24) {
            *x = -1.0;
        }
        let prof = rearrange(&Field::new(g, v).unwrap(), 0.0);
        assert_eq!(prof.steps(), vec![(2.0, 1.0), (1.0, 3.0)]);
        assert_eq!(prof.distribution(1.5), 1.0);
        assert_eq!(prof.f_star(0.5), 2.0);
        assert_eq!(prof.f_star(1.0), 1.0);
        assert_eq!(prof.f_star(4.0), 0.0);
        assert!((prof.f_star_star(2.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn ball_values() {
        let v = 4.0 * PI / 3.0;
        let prof = StepProfile::new(&[(1.0, v)]).unwrap();
        let s = prof.lorentz(3.0, 1.0, LorentzFlavor::Starred).unwrap();
        let m = prof.lorentz(3.0, 1.0, LorentzFlavor::Maximal).unwrap();
        assert!((s - 3.0 * v.cbrt()).abs() < 1e-12);
        assert!((m - 4.5 * v.cbrt()).abs() < 1e-12);
        assert!((m / s - 1.5).abs() < 1e-14);
    }

    #[test]
    fn p_one_and_infinity() {
        let prof = StepProfile::new(&[(3.0, 0.5), (1.0, 2.0), (0.2, 7.0)]).unwrap();
        let l1 = 3.0 * 0.5 + 2.0 + 1.4;
        assert!((prof.lorentz(1.0, f64::INFINITY, LorentzFlavor::Maximal).unwrap() - l1).abs() < 1e-12);
        assert_eq!(prof.lorentz(f64::INFINITY, f64::INFINITY, LorentzFlavor::Maximal).unwrap(), 3.0);
        assert!(prof.lorentz(1.0, 2.0, LorentzFlavor::Starred).is_err());
        assert!(prof.lorentz(0.5, 2.0, LorentzFlavor::Starred).is_err());
    }

    #[test]
    fn non_integer_q_matches_quadrature() {
        let prof = StepProfile::new(&[(3.0, 0.5), (1.0, 2.0), (0.2, 7.0)]).unwrap();
        let (p, q) = (2.5, 1.5);
        let got = prof.lorentz(p, q, LorentzFlavor::Maximal).unwrap();
        // brute-force in log t
        let n = 400_000;
        let (lo, hi) = ((1e-9f64).ln(), (1e7f64).ln());
        let h = (hi - lo) / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            let t = (lo + (i as f64 + 0.5) * h).exp();
            s += (t.powf(1.0 / p) * prof.f_star_star(t)).powf(q) * h;
        }
        assert!((got - s.powf(1.0 / q)).abs() < 1e-5 * got, "{got} vs {}", s.powf(1.0 / q));
    }
}
