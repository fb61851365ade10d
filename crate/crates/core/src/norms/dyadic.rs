//! Smooth dyadic partition of unity and the Littlewood–Paley form of the H^s_l norm.

use super::sobolev::spectral_norm;
use crate::error::Result;
use crate::grid::Field;

/// Blocks `j` and `k` have disjoint supports whenever |j - k| > this value.
pub const DYADIC_OVERLAP: usize = 2;

const INNER: f64 = 0.75;
const OUTER: f64 = 4.0 / 3.0;

fn smooth_step(t: f64) -> f64 {
    let e = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let (a, b) = (e(t), e(1.0 - t));
    a / (a + b)
}

/// Radial cutoff: 1 on |x| ≤ 3/4, 0 on |x| ≥ 4/3, smooth and nonincreasing between.
fn chi(r: f64) -> f64 {
    smooth_step((OUTER - r) / (OUTER - INNER))
}

/// ψ(x) as a function of r = |x|, supported in the ball of radius 4/3.
pub fn psi_bump(r: f64) -> f64 {
    chi(r)
}

/// φ(x) as a function of r = |x|, supported in the annulus 3/4 < r < 8/3.
pub fn phi_bump(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// Values of ψ and of φ(2^{-j}·) for j = 0..=j_max at the given radii.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    pub psi: Vec<f64>,
    /// `phi[j][i]` = φ(2^{-j} r_i)
    pub phi: Vec<Vec<f64>>,
}

impl DyadicPartition {
    /// |ψ + Σ_j φ_j − 1| at each point.
    pub fn residuals(&self) -> Vec<f64> {
        (0..self.psi.len())
            .map(|i| (self.psi[i] + self.phi.iter().map(|p| p[i]).sum::<f64>() - 1.0).abs())
            .collect()
    }
}

/// Number of blocks needed so that every radius lies below 2^{j_max}·(3/4).
pub fn dyadic_partition(radii: &[f64]) -> DyadicPartition {
    let rmax = radii.iter().copied().fold(0.0, f64::max);
    let mut jmax = 0;
    while 0.75 * 2f64.powi(jmax) <= rmax {
        jmax += 1;
    }
    DyadicPartition {
        psi: radii.iter().map(|&r| psi_bump(r)).collect(),
        phi: (0..=jmax)
            .map(|j| radii.iter().map(|&r| phi_bump(r * 2f64.powi(-j))).collect())
            .collect(),
    }
}

/// P_j f; j = -1 is the ψ block.
pub fn project(f: &Field, j: i32) -> Field {
    let g = *f.grid();
    let scale = 2f64.powi(-j.max(0));
    let vals = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let v = g.velocity(i);
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let w = if j < 0 { psi_bump(r) } else { phi_bump(r * scale) };
            x * w
        })
        .collect();
    Field::new(g, vals).expect("finite product")
}

/// (Σ_k 2^{2kl} ‖P_k f‖²_{H^s})^{1/2}, k from -1 while 2^k ≤ √3 L, H^s by the Fourier weight (1+|ξ|²)^s.
pub fn dyadic_norm(f: &Field, s: f64, l: f64) -> Result<f64> {
    let reach = 3f64.sqrt() * f.grid().extent();
    let mut total = 0.0;
    let mut k = -1;
    loop {
        let block = project(f, k);
        let hs = spectral_norm(&block, |xi2| (1.0 + xi2).powf(s))?;
        total += 2f64.powf(2.0 * k as f64 * l) * hs * hs;
        if 2f64.powi(k) > reach {
            break;
        }
        k += 1;
    }
    Ok(total.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn partition_of_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let radii: Vec<f64> = (0..1000).map(|_| rng.gen_range(0.0..50.0)).collect();
        let p = dyadic_partition(&radii);
        assert!(p.residuals().iter().all(|&r| r <= 1e-12));
        assert!(p.psi.iter().chain(p.phi.iter().flatten()).all(|&x| x >= 0.0));
    }

    #[test]
    fn supports() {
        assert_eq!(psi_bump(4.0 / 3.0), 0.0);
        assert_eq!(phi_bump(0.75), 0.0);
        assert_eq!(phi_bump(8.0 / 3.0), 0.0);
        assert!(phi_bump(1.2) > 0.0);
        for r in (0..4000).map(|i| i as f64 * 0.01) {
            for j in 0..6 {
                for k in 0..6 {
                    if (j as i32 - k as i32).unsigned_abs() as usize > DYADIC_OVERLAP {
                        let a = phi_bump(r * 2f64.powi(-j));
                        let b = phi_bump(r * 2f64.powi(-k));
                        assert_eq!(a * b, 0.0);
                    }
                }
                if j > DYADIC_OVERLAP as i32 - 1 {
                    assert_eq!(psi_bump(r) * phi_bump(r * 2f64.powi(-j)), 0.0);
                }
            }
        }
    }
}
