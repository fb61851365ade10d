//! Both sides of the coercivity estimate for the diffusion matrix a * f.

use super::kernel::{KernelSampler, KernelSpec};
use super::plan::{ConvolutionPlan, Which};
use crate::error::{LandauError, Result};
use crate::grid::{gradient, Field, SYM_PAIRS};
use crate::par;

use super::dissipation::DIRECT_MAX_N;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoercivityRoute {
    /// Direct 6-D summation for N ≤ 12, convolution otherwise.
    Auto,
    Direct,
    Convolution,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CoercivityPair {
    pub lhs: f64,
    pub rhs: f64,
    pub a_j: f64,
}

/// A_j(f) = ∫ f v_j².
pub fn a_moment(f: &Field, j: usize) -> f64 {
    let g = f.grid();
    let v = f.values();
    par::sum_by(g.len(), |i| v[i] * g.velocity(i)[j].powi(2)) * g.cell_volume()
}

/// `(lhs, rhs, A_j)` with lhs = ∫|∇p|²⟨v⟩^{m-3} and
/// rhs = 4‖f‖_{L¹₅} A_j⁻² ∫(a*f):∇p⊗∇p ⟨v⟩^m for the Coulomb kernel.
pub fn coercivity_pair(f: &Field, p: &Field, m: f64, j: usize, route: CoercivityRoute) -> Result<CoercivityPair> {
    f.same_grid(p)?;
    if j > 2 {
        return Err(LandauError::Domain(format!("direction index must be 0, 1 or 2, got {j}")));
    }
    if f.min() < 0.0 {
        return Err(LandauError::Domain("coercivity needs f >= 0".into()));
    }
    let g = *f.grid();
    let a_j = a_moment(f, j);
    if a_j <= 0.0 {
        return Err(LandauError::Degenerate(format!("A_{} vanishes", j + 1)));
    }
    let dp = gradient(p);
    let dv3 = g.cell_volume();
    let lhs = par::sum_by(g.len(), |i| {
        let s: f64 = (0..3).map(|k| dp[k].values()[i].powi(2)).sum();
        s * g.bracket(i).powf(m - 3.0)
    }) * dv3;
    let fv = f.values();
    let l15 = par::sum_by(g.len(), |i| fv[i].abs() * g.bracket(i).powi(5)) * dv3;

    let direct = match route {
        CoercivityRoute::Auto => g.points_per_axis() <= DIRECT_MAX_N,
        CoercivityRoute::Direct => true,
        CoercivityRoute::Convolution => false,
    };
    let spec = KernelSpec::coulomb(0.0)?;
    let af: Vec<Vec<f64>> = if direct {
        if g.points_per_axis() > DIRECT_MAX_N {
            return Err(LandauError::Resolution(format!(
                "direct coercivity sum is limited to N <= {DIRECT_MAX_N}"
            )));
        }
        let s = KernelSampler::new(spec, g.spacing());
        let mut out = vec![vec![0.0; g.len()]; 6];
        for a in 0..g.len() {
            let ca = g.coords(a);
            let mut acc = [0.0; 6];
            for b in 0..g.len() {
                let cb = g.coords(b);
                let d = [
                    ca[0] as i64 - cb[0] as i64,
                    ca[1] as i64 - cb[1] as i64,
                    ca[2] as i64 - cb[2] as i64,
                ];
                let k = s.a(d);
                for c in 0..6 {
                    acc[c] += k[c] * fv[b];
                }
            }
            for c in 0..6 {
                out[c][a] = acc[c] * dv3;
            }
        }
        out
    } else {
        let plan = ConvolutionPlan::new(g, spec);
        SYM_PAIRS
            .iter()
            .map(|&(a, b)| plan.convolve(f, Which::A(a, b)).map(Field::into_values))
            .collect::<Result<_>>()?
    };
    let quad = par::sum_by(g.len(), |i| {
        let d = [dp[0].values()[i], dp[1].values()[i], dp[2].values()[i]];
        let mut s = 0.0;
        for (c, &(a, b)) in SYM_PAIRS.iter().enumerate() {
            let w = if a == b { 1.0 } else { 2.0 };
            s += w * af[c][i] * d[a] * d[b];
        }
        s * g.bracket(i).powf(m)
    }) * dv3;
    let rhs = 4.0 * l15 * quad / (a_j * a_j);
    Ok(CoercivityPair { lhs, rhs, a_j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, reference_maxwellian};

    #[test]
    fn a_moment_of_maxwellian() {
        let g = build_grid(8.0, 32).unwrap();
        let mu = reference_maxwellian(&g);
        for j in 0..3 {
            assert!((a_moment(&mu, j) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn routes_agree() {
        let g = build_grid(5.0, 10).unwrap();
        let mu = reference_maxwellian(&g);
        let p = Field::from_fn(g, |v| (0.7 * v[0] - 0.2 * v[1] * v[2]).sin() * (-0.1 * v[2] * v[2]).exp()).unwrap();
        let a = coercivity_pair(&mu, &p, 3.0, 1, CoercivityRoute::Direct).unwrap();
        let b = coercivity_pair(&mu, &p, 3.0, 1, CoercivityRoute::Convolution).unwrap();
        assert!((a.rhs - b.rhs).abs() <= 1e-6 * a.rhs.abs());
        assert_eq!(a.lhs, b.lhs);
    }

    #[test]
    fn degenerate_direction() {
        let g = build_grid(4.0, 8).unwrap();
        let z = Field::zeros(g);
        assert!(matches!(
            coercivity_pair(&z, &z, 0.0, 0, CoercivityRoute::Auto),
            Err(LandauError::Degenerate(_))
        ));
    }
}
