//! Interpolation inequalities and the dyadic characterization of weighted Sobolev norms.

use serde::Serialize;

use super::report::IneqReport;
use crate::error::Result;
use crate::grid::{hessian, Field};
use crate::norms::{dyadic_norm, lorentz_norm, lp_norm, sobolev_norm, spectral_norm, LorentzFlavor, SobolevFlavor};

/// Weight indices probed by the interpolation checks.
pub const INTERP_WEIGHTS: [f64; 3] = [0.0, 2.0, 6.0];

/// ‖f‖_{H¹} = (∫(1+|ξ|²)|f̂|²)^{1/2}
pub fn h1_norm(f: &Field) -> Result<f64> {
    spectral_norm(f, |xi2| 1.0 + xi2)
}

/// ‖∇²f‖_{L²_l}, all nine second derivatives.
pub fn hessian_l2(f: &Field, l: f64) -> Result<f64> {
    let h = hessian(f);
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += lp_norm(h.get(i, j), 2.0, l)?.powi(2);
        }
    }
    Ok(s.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterpSides {
    pub m: f64,
    /// ‖f‖_{L^{3,1}_m} and ‖f‖^{1/5}_{L¹_{5m+1}}‖f‖^{4/5}_{H¹}
    pub l31: (f64, f64),
    /// ‖f‖_{H¹_m} against the two displayed right sides.
    pub h1a: (f64, f64),
    pub h1b: (f64, f64),
}

pub fn interpolation_sides(f: &Field, m: f64) -> Result<InterpSides> {
    let h1 = h1_norm(f)?;
    let l31 = lorentz_norm(f, 3.0, 1.0, m, LorentzFlavor::Maximal)?;
    let r31 = lp_norm(f, 1.0, 5.0 * m + 1.0)?.powf(0.2) * h1.powf(0.8);
    let h1m = sobolev_norm(f, 1.0, m, SobolevFlavor::Weighted)?;
    let ra = lp_norm(f, 1.0, 3.75 + 3.5 * m)?.powf(2.0 / 7.0)
        * (lp_norm(f, 1.0, -1.5)? + hessian_l2(f, -1.5)?).powf(5.0 / 7.0);
    let rb = lp_norm(f, 1.0, 1.25 + 3.5 * m)?.powf(2.0 / 7.0)
        * (lp_norm(f, 1.0, -0.5)? + hessian_l2(f, -0.5)?).powf(5.0 / 7.0);
    Ok(InterpSides { m, l31: (l31, r31), h1a: (h1m, ra), h1b: (h1m, rb) })
}

/// Three fitted reports per weight index (L^{3,1} and both H¹_m bounds).
pub fn check_interpolations(corpus: &[Field], weights: &[f64], seed: u64) -> Result<Vec<IneqReport>> {
    let mut out = Vec::new();
    for &m in weights {
        let sides = corpus.iter().map(|f| interpolation_sides(f, m)).collect::<Result<Vec<_>>>()?;
        let col = |pick: fn(&InterpSides) -> (f64, f64)| sides.iter().map(pick).collect::<Vec<_>>();
        out.push(IneqReport::fitted_upper(format!("interp_l31_m{m}"), &col(|s| s.l31), seed));
        out.push(IneqReport::fitted_upper(format!("interp_h1_a_m{m}"), &col(|s| s.h1a), seed));
        out.push(IneqReport::fitted_upper(format!("interp_h1_b_m{m}"), &col(|s| s.h1b), seed));
    }
    Ok(out)
}

/// (Σ_k 2^{2kl}‖P_k f‖²_{H^s})^{1/2} and ‖⟨v⟩^l f‖_{H^s}.
pub fn dyadic_sides(f: &Field, s: f64, l: f64) -> Result<(f64, f64)> {
    let sum = dyadic_norm(f, s, l)?;
    let w = if l == 0.0 { f.clone() } else { f.weighted(&f.grid().weight(l)) };
    let direct = spectral_norm(&w, |xi2| (1.0 + xi2).powf(s))?;
    Ok((sum, direct))
}

/// Upper and lower fitted bounds for each (s, l).
pub fn check_dyadic_equivalence(corpus: &[Field], params: &[(f64, f64)], seed: u64) -> Result<Vec<IneqReport>> {
    let mut out = Vec::new();
    for &(s, l) in params {
        let pairs = corpus.iter().map(|f| dyadic_sides(f, s, l)).collect::<Result<Vec<_>>>()?;
        out.push(IneqReport::fitted_upper(format!("dyadic_upper_s{s}_l{l}"), &pairs, seed));
        out.push(IneqReport::fitted_lower(format!("dyadic_lower_s{s}_l{l}"), &pairs, seed));
    }
    Ok(out)
}

/// f_λ(v) = λ³g(λv) by sampling `g` at λv.
pub fn dilate<G: Fn([f64; 3]) -> f64>(grid: &crate::grid::VelocityGrid, lambda: f64, g: G) -> Result<Field> {
    Field::from_fn(*grid, |v| lambda.powi(3) * g([lambda * v[0], lambda * v[1], lambda * v[2]]))
}
