//! Explicit Runge–Kutta steps for ∂_t f = Q(f, f), with moment projection and clipping.

use super::config::{DtPolicy, Positivity, Scheme, SolverConfig};
use crate::collision::{Coefficients, ConvolutionPlan, Form};
use crate::error::{LandauError, Result};
use crate::grid::{gradient, Field};
use crate::par;

/// Raw moments ∫f, ∫v f, ∫|v|² f.
pub type RawMoments = [f64; 5];

pub fn raw_moments(f: &Field) -> RawMoments {
    let g = f.grid();
    let v = f.values();
    let s = par::sums_by::<5, _>(g.len(), |i| {
        let x = g.velocity(i);
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        [v[i], x[0] * v[i], x[1] * v[i], x[2] * v[i], r2 * v[i]]
    });
    s.map(|x| x * g.cell_volume())
}

/// Q(f, f) and the coefficients it was built from.
pub fn collision_rhs(f: &Field, plan: &ConvolutionPlan, form: Form) -> Result<(Coefficients, Field)> {
    let c = Coefficients::new(f, plan, form)?;
    let q = c.apply(f, plan)?;
    Ok((c, q))
}

/// c·Δv²/λ_max with λ_max the largest diagonal entry of a*f.
pub fn auto_dt(coeffs: &Coefficients, c_cfl: f64) -> f64 {
    let dv = coeffs.grid().spacing();
    let lam = coeffs.max_diagonal();
    if lam > 0.0 {
        c_cfl * dv * dv / lam
    } else {
        f64::INFINITY
    }
}

fn checked(grid: crate::grid::VelocityGrid, vals: Vec<f64>, t: f64, what: &str) -> Result<Field> {
    if let Some(i) = vals.iter().position(|x| !x.is_finite()) {
        return Err(LandauError::Instability {
            t,
            detail: format!("{what}: nonfinite value at index {i}"),
        });
    }
    Field::new(grid, vals)
}

fn combine(f: &Field, terms: &[(f64, &Field)], t: f64) -> Result<Field> {
    let mut out = f.values().to_vec();
    for (c, k) in terms {
        for (o, x) in out.iter_mut().zip(k.values()) {
            *o += c * x;
        }
    }
    checked(*f.grid(), out, t, "stage update")
}

/// Affine-perturbation correction f + c0 f + c1 v·∇f + Σ c_{1+i} ∂_i f matching `target` exactly.
pub fn project_moments(f: &Field, target: &RawMoments) -> Result<Field> {
    let g = *f.grid();
    let grad = gradient(f);
    let vdg: Vec<f64> = (0..g.len())
        .map(|i| {
            let v = g.velocity(i);
            v[0] * grad[0].values()[i] + v[1] * grad[1].values()[i] + v[2] * grad[2].values()[i]
        })
        .collect();
    let vdg = Field::new(g, vdg)?;
    let modes = [f, &vdg, &grad[0], &grad[1], &grad[2]];
    let mut a = [[0.0; 5]; 5];
    for (m, phi) in modes.iter().enumerate() {
        let r = raw_moments(phi);
        for (row, x) in r.iter().enumerate() {
            a[row][m] = *x;
        }
    }
    let cur = raw_moments(f);
    let mut rhs = [0.0; 5];
    for r in 0..5 {
        rhs[r] = target[r] - cur[r];
    }
    let c = solve5(a, rhs).ok_or_else(|| LandauError::Degenerate("moment projection matrix is singular".into()))?;
    let mut out = f.values().to_vec();
    for (cm, phi) in c.iter().zip(modes) {
        for (o, x) in out.iter_mut().zip(phi.values()) {
            *o += cm * x;
        }
    }
    Field::new(g, out)
}

fn solve5(mut a: [[f64; 5]; 5], mut b: [f64; 5]) -> Option<[f64; 5]> {
    for col in 0..5 {
        let piv = (col..5).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..5 {
            let m = a[r][col] / a[col][col];
            for c in col..5 {
                a[r][c] -= m * a[col][c];
            }
            b[r] -= m * b[col];
        }
    }
    let mut x = [0.0; 5];
    for r in (0..5).rev() {
        let s: f64 = (r + 1..5).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Set negatives to zero and rescale to the previous mass.
pub fn clip(f: &Field) -> Result<Field> {
    let before = f.integral();
    let c = f.map(|x| x.max(0.0));
    let after = c.integral();
    if after > 0.0 && before > 0.0 {
        Ok(c.scale(before / after))
    } else {
        Ok(c)
    }
}

/// One step of size `dt` from time `t`; `k1` may carry Q(f, f) if already known.
pub fn step_from(
    f: &Field,
    k1: Option<Field>,
    dt: f64,
    t: f64,
    plan: &ConvolutionPlan,
    config: &SolverConfig,
) -> Result<Field> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(LandauError::Domain(format!("dt must be positive, got {dt}")));
    }
    let form = config.form;
    let q = |x: &Field| -> Result<Field> { Ok(collision_rhs(x, plan, form)?.1) };
    let k1 = match k1 {
        Some(k) => k,
        None => q(f)?,
    };
    let target = config.projection.then(|| raw_moments(f));
    let mut next = match config.scheme {
        Scheme::Rk2 => {
            let k2 = q(&combine(f, &[(dt, &k1)], t)?)?;
            combine(f, &[(0.5 * dt, &k1), (0.5 * dt, &k2)], t)?
        }
        Scheme::Rk4 => {
            let k2 = q(&combine(f, &[(0.5 * dt, &k1)], t)?)?;
            let k3 = q(&combine(f, &[(0.5 * dt, &k2)], t)?)?;
            let k4 = q(&combine(f, &[(dt, &k3)], t)?)?;
            let w = dt / 6.0;
            combine(f, &[(w, &k1), (2.0 * w, &k2), (2.0 * w, &k3), (w, &k4)], t)?
        }
    };
    if config.positivity == Positivity::Clip {
        next = clip(&next)?;
    }
    if let Some(target) = target {
        next = project_moments(&next, &target)?;
    }
    checked(*next.grid(), next.into_values(), t + dt, "after step")
}

/// One step; with the auto policy `dt` is ignored and recomputed from f.
pub fn step(f: &Field, dt: f64, plan: &ConvolutionPlan, config: &SolverConfig) -> Result<Field> {
    let (coeffs, k1) = collision_rhs(f, plan, config.form)?;
    let h = match config.dt {
        DtPolicy::Fixed(_) => dt,
        DtPolicy::Auto(_) => auto_dt(&coeffs, config.c_cfl),
    };
    step_from(f, Some(k1), h, 0.0, plan, config)
}
