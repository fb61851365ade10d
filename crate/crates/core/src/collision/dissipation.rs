//! Entropy and entropy dissipation.

use super::kernel::KernelSampler;
use super::operator::{landau_q, Form};
use super::plan::ConvolutionPlan;
use crate::error::{LandauError, Result};
use crate::grid::{moments, Field};
use crate::par;
use crate::stencil::{fornberg, map_lines};

/// Largest N for which the 6-D sums are attempted.
pub const DIRECT_MAX_N: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DissipationMethod {
    Single,
    Double,
}

/// Floor used inside logarithms only.
pub fn log_floor(f: &Field) -> f64 {
    1e-300 * f.max().max(1.0)
}

/// Negative values down to this fraction of max f are treated as roundoff.
pub const NEGATIVE_TOLERANCE: f64 = 1e-4;

fn require_nonnegative(f: &Field) -> Result<()> {
    let lo = f.min();
    if lo < -NEGATIVE_TOLERANCE * f.max().max(0.0) || (lo < 0.0 && f.max() <= 0.0) {
        return Err(LandauError::Domain(format!(
            "entropy quantities need f >= 0, min value {lo:e}"
        )));
    }
    Ok(())
}

/// H(f | μ_{ρ,u,T}) = ∫ f log(f/μ) - f + μ, with μ the Maxwellian sharing the moments of f.
pub fn relative_entropy(f: &Field) -> Result<f64> {
    let m = moments(f);
    let t = m
        .temperature
        .filter(|t| *t > 0.0)
        .ok_or_else(|| LandauError::Degenerate("relative entropy needs rho > 0 and T > 0".into()))?;
    relative_entropy_to(f, m.rho, m.u, t)
}

/// Relative entropy to a given Maxwellian.
pub fn relative_entropy_to(f: &Field, rho: f64, u: [f64; 3], t: f64) -> Result<f64> {
    require_nonnegative(f)?;
    let g = f.grid();
    let vals = f.values();
    let lc = (rho / (2.0 * std::f64::consts::PI * t).powf(1.5)).ln();
    let s = par::sum_by(g.len(), |i| {
        let v = g.velocity(i);
        let r2 = (v[0] - u[0]).powi(2) + (v[1] - u[1]).powi(2) + (v[2] - u[2]).powi(2);
        let log_mu = lc - r2 / (2.0 * t);
        let x = vals[i];
        let xlog = if x > 0.0 { x * (x.ln() - log_mu) } else { 0.0 };
        xlog - x + log_mu.exp()
    });
    Ok(s * g.cell_volume())
}

/// D(f) = -∫ Q(f,f) log f, or the symmetric double integral.
pub fn entropy_dissipation(f: &Field, plan: &ConvolutionPlan, method: DissipationMethod) -> Result<f64> {
    require_nonnegative(f)?;
    match method {
        DissipationMethod::Single => {
            let q = landau_q(f, f, plan, Form::Divergence)?;
            Ok(dissipation_from_q(f, &q))
        }
        DissipationMethod::Double => dissipation_double(f, plan),
    }
}

/// -∫ Q log f for a precomputed Q(f, f).
pub fn dissipation_from_q(f: &Field, q: &Field) -> f64 {
    let floor = log_floor(f);
    let fv = f.values();
    let qv = q.values();
    -par::sum_by(fv.len(), |i| qv[i] * fv[i].max(floor).ln()) * f.grid().cell_volume()
}

/// First derivative from the 11 nearest nodes, windows shifted inward at the ends.
fn windowed_d1(x: &[f64], out: &mut [f64], dv: f64) {
    let n = x.len();
    let w = n.min(11);
    for (i, o) in out.iter_mut().enumerate() {
        let start = i.saturating_sub(w / 2).min(n - w);
        let pos: Vec<f64> = (start..start + w).map(|k| k as f64 - i as f64).collect();
        let c = fornberg(0.0, &pos, 1);
        *o = (0..w).map(|k| c[1][k] * x[start + k]).sum::<f64>() / dv;
    }
}

fn dissipation_double(f: &Field, plan: &ConvolutionPlan) -> Result<f64> {
    plan.check(f)?;
    let g = *f.grid();
    let n = g.points_per_axis();
    if n > DIRECT_MAX_N {
        return Err(LandauError::Resolution(format!(
            "double-integral dissipation is limited to N <= {DIRECT_MAX_N}, got {n}"
        )));
    }
    let dv = g.spacing();
    let floor = log_floor(f);
    let fv = f.values();
    // ∇f/f as ∇ log f: exact for Maxwellians, no relative blow-up in the tails.
    let logf = f.map(|x| x.max(floor).ln());
    let x: Vec<Vec<f64>> = (0..3)
        .map(|j| map_lines(logf.values(), g.dims(), j, n, |x, out| windowed_d1(x, out, dv)))
        .collect();
    let sampler = KernelSampler::new(*plan.spec(), dv);
    let s = par::sum_by(g.len(), |p| {
        if fv[p] == 0.0 {
            return 0.0;
        }
        let cp = g.coords(p);
        let mut acc = 0.0;
        for q in 0..g.len() {
            if fv[q] == 0.0 {
                continue;
            }
            let cq = g.coords(q);
            let d = [
                cp[0] as i64 - cq[0] as i64,
                cp[1] as i64 - cq[1] as i64,
                cp[2] as i64 - cq[2] as i64,
            ];
            let a = sampler.a(d);
            let y = [x[0][p] - x[0][q], x[1][p] - x[1][q], x[2][p] - x[2][q]];
            let quad = a[0] * y[0] * y[0]
                + a[1] * y[1] * y[1]
                + a[2] * y[2] * y[2]
                + 2.0 * (a[3] * y[0] * y[1] + a[4] * y[0] * y[2] + a[5] * y[1] * y[2]);
            acc += fv[q] * quad;
        }
        fv[p] * acc
    });
    let dv3 = g.cell_volume();
    Ok(0.5 * s * dv3 * dv3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::KernelSpec;
    use crate::grid::{build_grid, reference_maxwellian, sample_maxwellian};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn maxwellian_has_zero_entropy() {
        let g = build_grid(8.0, 32).unwrap();
        let mu = reference_maxwellian(&g);
        let h0 = relative_entropy(&mu).unwrap();
        assert!(h0.abs() < 1e-12, "{h0}");
        let other = sample_maxwellian(&g, 1.0, [0.3, 0.0, 0.0], 1.0).unwrap();
        // H(μ_u | μ_0) = |u|²/2
        let h = relative_entropy_to(&other, 1.0, [0.0; 3], 1.0).unwrap();
        assert!((h - 0.045).abs() < 1e-10, "{h}");
    }

    #[test]
    fn double_form_nonnegative() {
        let g = build_grid(4.0, 8).unwrap();
        let plan = ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let f = Field::new(g, (0..g.len()).map(|_| rng.gen_range(0.0..1.0)).collect()).unwrap();
            let d = entropy_dissipation(&f, &plan, DissipationMethod::Double).unwrap();
            assert!(d >= 0.0);
        }
    }

    #[test]
    fn rejects_negative_and_large_grids() {
        let g = build_grid(4.0, 16).unwrap();
        let plan = ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()));
        let mu = reference_maxwellian(&g);
        assert!(matches!(
            entropy_dissipation(&mu, &plan, DissipationMethod::Double),
            Err(LandauError::Resolution(_))
        ));
        assert!(matches!(
            entropy_dissipation(&mu.scale(-1.0), &plan, DissipationMethod::Single),
            Err(LandauError::Domain(_))
        ));
    }
}
