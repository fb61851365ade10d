//! Two-scale initial data with small entropy and large Ḣ^{1/2} norm.
//!
//! f₀(v) = c^{3/2}[(1−η)μ(c^{1/2}v) + ηε^{−3}φ₀(ε^{−1}c^{1/2}v)], c = 1 − η + ηε², η = ε^{11/9}, φ₀ = μ.
//! With φ₀ = μ every term is an isotropic Gaussian, so moments and Sobolev norms are separable.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{LandauError, Result};
use crate::grid::{Field, VelocityGrid};

/// Largest admissible oscillation scale.
pub const MAX_SCALE: f64 = 0.25;

/// Normalization tolerance checked on every generated datum.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Weight w and standard deviation σ of w(2πσ²)^{−3/2}exp(−|v|²/(2σ²)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianTerm {
    pub weight: f64,
    pub sigma: f64,
}

impl GaussianTerm {
    fn profile(&self, x: f64) -> f64 {
        (-(x * x) / (2.0 * self.sigma * self.sigma)).exp() / ((2.0 * PI).sqrt() * self.sigma)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OscillatoryDatum {
    pub eps: f64,
    pub eta: f64,
    /// 1 − η + ηε²
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridMoments {
    pub mass: f64,
    pub mean: [f64; 3],
    /// ∫|v|² f
    pub energy: f64,
}

impl OscillatoryDatum {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= MAX_SCALE) {
            return Err(LandauError::Domain(format!("oscillation scale must lie in (0, {MAX_SCALE}], got {eps}")));
        }
        let eta = eps.powf(11.0 / 9.0);
        Ok(OscillatoryDatum { eps, eta, c: 1.0 - eta + eta * eps * eps })
    }

    /// The two components of f₀.
    pub fn terms(&self) -> [GaussianTerm; 2] {
        let s = self.c.sqrt();
        [
            GaussianTerm { weight: 1.0 - self.eta, sigma: 1.0 / s },
            GaussianTerm { weight: self.eta, sigma: self.eps / s },
        ]
    }

    /// Components of h₀ = f₀ − μ.
    pub fn h_terms(&self) -> [GaussianTerm; 3] {
        let [a, b] = self.terms();
        [a, b, GaussianTerm { weight: -1.0, sigma: 1.0 }]
    }

    pub fn value(&self, v: [f64; 3]) -> f64 {
        self.terms()
            .iter()
            .map(|t| t.weight * v.iter().map(|x| t.profile(*x)).product::<f64>())
            .sum()
    }

    pub fn check_resolution(&self, grid: &VelocityGrid) -> Result<()> {
        if grid.spacing() > self.eps / 4.0 {
            return Err(LandauError::Resolution(format!(
                "spacing {} does not resolve the oscillation scale {} (need at most {})",
                grid.spacing(),
                self.eps,
                self.eps / 4.0
            )));
        }
        Ok(())
    }

    /// Cell-centered quadrature of the moments, computed axis by axis (identical to the 3-D sum).
    pub fn grid_moments(&self, grid: &VelocityGrid) -> GridMoments {
        let x = grid.nodes();
        let dv = grid.spacing();
        let mut out = GridMoments { mass: 0.0, mean: [0.0; 3], energy: 0.0 };
        for t in self.terms() {
            let p: Vec<f64> = x.iter().map(|&s| t.profile(s)).collect();
            let m0: f64 = p.iter().sum::<f64>() * dv;
            let m1: f64 = p.iter().zip(&x).map(|(a, s)| a * s).sum::<f64>() * dv;
            let m2: f64 = p.iter().zip(&x).map(|(a, s)| a * s * s).sum::<f64>() * dv;
            out.mass += t.weight * m0.powi(3);
            for m in out.mean.iter_mut() {
                *m += t.weight * m1 * m0 * m0;
            }
            out.energy += t.weight * 3.0 * m2 * m0 * m0;
        }
        out
    }

    /// Errors unless mass 1, zero mean, energy 3 hold within `NORMALIZATION_TOL` on this grid.
    pub fn check_normalization(&self, grid: &VelocityGrid) -> Result<GridMoments> {
        let m = self.grid_moments(grid);
        let off = (m.mass - 1.0)
            .abs()
            .max(m.mean.iter().fold(0.0f64, |a, x| a.max(x.abs())))
            .max((m.energy - 3.0).abs());
        if !(off <= NORMALIZATION_TOL) {
            return Err(LandauError::Resolution(format!(
                "normalization off by {off:e} on this grid; enlarge the domain"
            )));
        }
        Ok(m)
    }

    pub fn field(&self, grid: &VelocityGrid) -> Result<Field> {
        self.check_resolution(grid)?;
        self.check_normalization(grid)?;
        Field::from_fn(*grid, |v| self.value(v))
    }

    /// ‖h₀‖_{Ḣ^s} in closed form: (2π²)^{−1} Σ w_j w_k Γ(s+3/2)/(2a^{s+3/2}), a = (σ_j²+σ_k²)/2.
    pub fn h_dot_norm(&self, s: f64) -> Result<f64> {
        if !(s > -1.5) {
            return Err(LandauError::Domain(format!("Ḣ^s needs s > -3/2, got {s}")));
        }
        let terms = self.h_terms();
        let g = gamma(s + 1.5);
        let mut total = 0.0;
        for a in &terms {
            for b in &terms {
                let q = 0.5 * (a.sigma * a.sigma + b.sigma * b.sigma);
                total += a.weight * b.weight * g / (2.0 * q.powf(s + 1.5));
            }
        }
        Ok((total / (2.0 * PI * PI)).max(0.0).sqrt())
    }

    /// The zero-padded DFT norm that `spectral_norm` would give for h₀ sampled on `grid`,
    /// assembled from one-axis cosine sums.
    pub fn grid_h_dot_norm(&self, grid: &VelocityGrid, s: f64) -> f64 {
        let n = grid.points_per_axis();
        let m = 2 * n;
        let dv = grid.spacing();
        let x = grid.nodes();
        let dk = 2.0 * PI / (m as f64 * dv);
        let half = m / 2;
        let terms = self.h_terms();
        // R_j(ω) = Σ_n g_j(x_n) cos(ω x_n) for ω = i·dk, i = 0..=M/2
        let r: Vec<Vec<f64>> = terms
            .iter()
            .map(|t| {
                let p: Vec<f64> = x.iter().map(|&y| t.profile(y)).collect();
                (0..=half)
                    .map(|i| {
                        let w = i as f64 * dk;
                        p.iter().zip(&x).map(|(a, y)| a * (w * y).cos()).sum::<f64>()
                    })
                    .collect()
            })
            .collect();
        let mult = |i: usize| if i == 0 || i == half { 1.0 } else { 2.0 };
        let f2: Vec<f64> = (0..=half).map(|i| (i as f64 * dk).powi(2)).collect();
        let weight = |x: f64| if s == 0.5 { x.sqrt() } else { x.powf(s) };
        // the summand is symmetric in (i, j, k): sum over i ≤ j ≤ k with permutation counts
        let mut total = 0.0;
        for k in 0..=half {
            for j in 0..=k {
                let base: Vec<f64> = terms.iter().enumerate().map(|(t, term)| term.weight * r[t][j] * r[t][k]).collect();
                let wjk = mult(j) * mult(k);
                let mut row = 0.0;
                for i in 0..=j {
                    let xi2 = f2[i] + f2[j] + f2[k];
                    if xi2 == 0.0 && s != 0.0 {
                        continue;
                    }
                    let perms = match (i == j, j == k) {
                        (true, true) => 1.0,
                        (false, false) => 6.0,
                        _ => 3.0,
                    };
                    let amp: f64 = (0..terms.len()).map(|t| base[t] * r[t][i]).sum();
                    row += perms * mult(i) * weight(xi2) * amp * amp;
                }
                total += wjk * row;
            }
        }
        // Σ |F|² Δv⁶ Δξ³/(2π)³; the 1-D sums already carry no Δv
        let scale = dv.powi(6) * dk.powi(3) / (8.0 * PI * PI * PI);
        (total * scale).sqrt()
    }
}

/// f₀ sampled on `grid`; the grid must resolve ε/4 and hold the normalization to 1e−8.
pub fn make_oscillatory_data(eps: f64, grid: &VelocityGrid) -> Result<Field> {
    OscillatoryDatum::new(eps)?.field(grid)
}

/// Scales used for the Ḣ^{1/2} growth fit.
pub const SLOPE_SCALES: [f64; 4] = [1.0 / 8.0, 1.0 / 12.0, 1.0 / 16.0, 1.0 / 24.0];

/// Least-squares slope of ln y on ln x.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
