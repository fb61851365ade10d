//! The Landau kernels a, b = div a, c = -div b, plus cell-averaged samples for the lattice.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LandauError, Result};
use crate::quad::{gauss_legendre, integrate};

/// Kernel family: `a(z) = (|z|² + ε²)^{(γ+2)/2} (Id − ẑ⊗ẑ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub epsilon: f64,
    pub gamma: f64,
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec {
            epsilon: 0.0,
            gamma: -3.0,
        }
    }
}

impl KernelSpec {
    pub fn new(epsilon: f64, gamma: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(LandauError::Config(format!("epsilon must be >= 0, got {epsilon}")));
        }
        if !(-3.0..=0.0).contains(&gamma) {
            return Err(LandauError::Config(format!("gamma must lie in [-3, 0], got {gamma}")));
        }
        Ok(KernelSpec { epsilon, gamma })
    }

    pub fn coulomb(epsilon: f64) -> Result<Self> {
        KernelSpec::new(epsilon, -3.0)
    }

    pub fn is_coulomb(&self) -> bool {
        self.gamma == -3.0
    }

    /// Coulomb with the Δ-tied default ε = 2Δv.
    pub fn default_for_spacing(dv: f64) -> Self {
        KernelSpec {
            epsilon: 2.0 * dv,
            gamma: -3.0,
        }
    }

    /// Radial profile φ(r) with a = φ (Id − ẑẑ).
    #[inline]
    pub fn phi(&self, r2: f64) -> f64 {
        let s2 = r2 + self.epsilon * self.epsilon;
        if self.is_coulomb() {
            1.0 / s2.sqrt()
        } else {
            s2.powf(0.5 * (self.gamma + 2.0))
        }
    }

    /// c(z) = 2 s^γ (s²/r² + γ + 2), s² = r² + ε².
    #[inline]
    fn c_value(&self, r2: f64) -> f64 {
        let s2 = r2 + self.epsilon * self.epsilon;
        if self.is_coulomb() {
            let e2 = self.epsilon * self.epsilon;
            2.0 * e2 / (r2 * s2 * s2.sqrt())
        } else {
            2.0 * s2.powf(0.5 * self.gamma) * (s2 / r2 + self.gamma + 2.0)
        }
    }

    /// ∫_0^R φ(r) r² dr.
    fn radial_moment(&self, big_r: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
        let e = self.epsilon;
        if self.is_coulomb() {
            if e == 0.0 {
                0.5 * big_r * big_r
            } else {
                let s = (big_r * big_r + e * e).sqrt();
                0.5 * (big_r * s - e * e * ((big_r + s) / e).ln())
            }
        } else if e == 0.0 {
            big_r.powf(self.gamma + 5.0) / (self.gamma + 5.0)
        } else {
            integrate(|r| r * r * self.phi(r * r), 0.0, big_r, rule)
        }
    }
}

fn norm2(z: [f64; 3]) -> f64 {
    z[0] * z[0] + z[1] * z[1] + z[2] * z[2]
}

pub fn kernel_a(z: [f64; 3], spec: &KernelSpec) -> Result<[[f64; 3]; 3]> {
    let r2 = norm2(z);
    let mut a = [[0.0; 3]; 3];
    if r2 == 0.0 {
        if spec.epsilon == 0.0 {
            return Err(LandauError::Singularity);
        }
        // angular average of the direction-dependent limit
        let d = 2.0 / 3.0 * spec.phi(0.0);
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = d;
        }
        return Ok(a);
    }
    let p = spec.phi(r2);
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            a[i][j] = p * (delta - z[i] * z[j] / r2);
        }
    }
    Ok(a)
}

pub fn kernel_b(z: [f64; 3], spec: &KernelSpec) -> Result<[f64; 3]> {
    let r2 = norm2(z);
    if r2 == 0.0 {
        return Err(LandauError::Singularity);
    }
    let c = -2.0 * spec.phi(r2) / r2;
    Ok([c * z[0], c * z[1], c * z[2]])
}

/// Pointwise c = -Σ∂_i b_i away from the origin. For Coulomb with ε = 0 this is 0; the
/// 8πδ₀ mass is carried separately.
pub fn kernel_c(z: [f64; 3], spec: &KernelSpec) -> Result<f64> {
    let r2 = norm2(z);
    if r2 == 0.0 {
        return Err(LandauError::Singularity);
    }
    if spec.is_coulomb() && spec.epsilon == 0.0 {
        return Ok(0.0);
    }
    Ok(spec.c_value(r2))
}

/// Lattice samples at displacement `d·Δv`, with the z = 0 cell replaced by cell averages.
#[derive(Clone, Debug)]
pub struct KernelSampler {
    spec: KernelSpec,
    dv: f64,
    a0: f64,
    c0: f64,
    near: (Vec<f64>, Vec<f64>),
    far: (Vec<f64>, Vec<f64>),
}

impl KernelSampler {
    pub fn new(spec: KernelSpec, dv: f64) -> Self {
        let h = 0.5 * dv;
        let face = gauss_legendre(16);
        let radial = gauss_legendre(24);
        let vol = dv * dv * dv;
        // ∫_cell a = (2/3) Id ∮ G(R) dω with dω = h dy dz / R³ on each of the six faces.
        let mut s_a = 0.0;
        let mut s_c = 0.0;
        for (yi, wy) in face.0.iter().zip(&face.1) {
            for (zi, wz) in face.0.iter().zip(&face.1) {
                let (y, z) = (h * yi, h * zi);
                let w = wy * wz * h * h;
                let big_r2 = h * h + y * y + z * z;
                let big_r = big_r2.sqrt();
                s_a += w * spec.radial_moment(big_r, &radial) * h / (big_r2 * big_r);
                // -∮ b·n = ∮ 2φ(R) h/R²
                s_c += w * 2.0 * spec.phi(big_r2) * h / big_r2;
            }
        }
        let a0 = 2.0 / 3.0 * 6.0 * s_a / vol;
        let c0 = if spec.is_coulomb() && spec.epsilon == 0.0 {
            8.0 * PI / vol
        } else {
            6.0 * s_c / vol
        };
        KernelSampler {
            spec,
            dv,
            a0,
            c0,
            near: gauss_legendre(12),
            far: gauss_legendre(4),
        }
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    /// Packed xx, yy, zz, xy, xz, yz.
    pub fn a(&self, d: [i64; 3]) -> [f64; 6] {
        if d == [0, 0, 0] {
            return [self.a0, self.a0, self.a0, 0.0, 0.0, 0.0];
        }
        let z = [d[0] as f64 * self.dv, d[1] as f64 * self.dv, d[2] as f64 * self.dv];
        let r2 = norm2(z);
        let p = self.spec.phi(r2);
        let q = p / r2;
        [
            p - q * z[0] * z[0],
            p - q * z[1] * z[1],
            p - q * z[2] * z[2],
            -q * z[0] * z[1],
            -q * z[0] * z[2],
            -q * z[1] * z[2],
        ]
    }

    pub fn b(&self, d: [i64; 3]) -> [f64; 3] {
        if d == [0, 0, 0] {
            return [0.0; 3];
        }
        let z = [d[0] as f64 * self.dv, d[1] as f64 * self.dv, d[2] as f64 * self.dv];
        kernel_b(z, &self.spec).expect("nonzero displacement")
    }

    /// Cell average of c over the cell centred at `d·Δv`, via the divergence theorem.
    pub fn c(&self, d: [i64; 3]) -> f64 {
        if d == [0, 0, 0] {
            return self.c0;
        }
        if self.spec.is_coulomb() && self.spec.epsilon == 0.0 {
            return 0.0;
        }
        let dmax = d.iter().map(|x| x.abs()).max().unwrap_or(0);
        let rule = if dmax <= 3 { &self.near } else { &self.far };
        let h = 0.5 * self.dv;
        let center = [d[0] as f64 * self.dv, d[1] as f64 * self.dv, d[2] as f64 * self.dv];
        let mut flux = 0.0;
        for axis in 0..3 {
            let (p, q) = match axis {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            for sign in [-1.0, 1.0] {
                let mut s = 0.0;
                for (xi, wi) in rule.0.iter().zip(&rule.1) {
                    for (yi, wj) in rule.0.iter().zip(&rule.1) {
                        let mut z = center;
                        z[axis] += sign * h;
                        z[p] += h * xi;
                        z[q] += h * yi;
                        let r2 = norm2(z);
                        let bn = -2.0 * self.spec.phi(r2) / r2 * z[axis];
                        s += wi * wj * bn;
                    }
                }
                flux += sign * s * h * h;
            }
        }
        -flux / (self.dv * self.dv * self.dv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn projection_annihilates_z() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for eps in [0.0, 0.3] {
            let spec = KernelSpec::coulomb(eps).unwrap();
            for _ in 0..100 {
                let z = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
                let a = kernel_a(z, &spec).unwrap();
                for row in a {
                    let s: f64 = row.iter().zip(&z).map(|(x, y)| x * y).sum();
                    assert!(s.abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn b_is_odd_and_is_divergence_of_a() {
        let spec = KernelSpec::coulomb(0.5).unwrap();
        let z = [0.6, -0.48, 0.64];
        let b = kernel_b(z, &spec).unwrap();
        let bm = kernel_b([-z[0], -z[1], -z[2]], &spec).unwrap();
        for i in 0..3 {
            assert_eq!(b[i], -bm[i]);
        }
        let h = 1e-4;
        for i in 0..3 {
            let mut s = 0.0;
            for j in 0..3 {
                let mut zp = z;
                let mut zm = z;
                zp[j] += h;
                zm[j] -= h;
                s += (kernel_a(zp, &spec).unwrap()[i][j] - kernel_a(zm, &spec).unwrap()[i][j]) / (2.0 * h);
            }
            assert!(((s - b[i]) / b[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn c_is_minus_divergence_of_b() {
        for spec in [KernelSpec::coulomb(0.4).unwrap(), KernelSpec::new(0.0, -1.5).unwrap(), KernelSpec::new(0.3, -2.0).unwrap()] {
            let z = [0.7, 0.2, -0.5];
            let h = 1e-4;
            let mut div = 0.0;
            for j in 0..3 {
                let mut zp = z;
                let mut zm = z;
                zp[j] += h;
                zm[j] -= h;
                div += (kernel_b(zp, &spec).unwrap()[j] - kernel_b(zm, &spec).unwrap()[j]) / (2.0 * h);
            }
            let c = kernel_c(z, &spec).unwrap();
            assert!(((c + div) / c).abs() < 1e-6);
        }
    }

    #[test]
    fn regularized_kernel_dominated() {
        let a0 = KernelSpec::coulomb(0.0).unwrap();
        let ae = KernelSpec::coulomb(0.7).unwrap();
        let z = [0.3, 0.1, -0.2];
        let x = kernel_a(z, &a0).unwrap();
        let y = kernel_a(z, &ae).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(y[i][j].abs() <= x[i][j].abs());
            }
        }
    }

    #[test]
    fn singular_origin() {
        let spec = KernelSpec::coulomb(0.0).unwrap();
        assert!(matches!(kernel_a([0.0; 3], &spec), Err(LandauError::Singularity)));
        assert!(kernel_a([0.0; 3], &KernelSpec::coulomb(0.5).unwrap()).is_ok());
    }

    #[test]
    fn c_total_mass_tends_to_eight_pi() {
        // The cell averages telescope to the outer flux of b, which tends to 8π.
        let spec = KernelSpec::coulomb(0.5).unwrap();
        let s = KernelSampler::new(spec, 0.25);
        let m = 24i64;
        let mut tot = 0.0;
        for i in -m..=m {
            for j in -m..=m {
                for k in -m..=m {
                    tot += s.c([i, j, k]);
                }
            }
        }
        tot *= 0.25f64.powi(3);
        // oracle: outward flux of -b through the outer cube, fine Gauss rule on each face
        let w = (m as f64 + 0.5) * 0.25;
        let rule = gauss_legendre(64);
        let mut face = 0.0;
        for (x, wx) in rule.0.iter().zip(&rule.1) {
            for (y, wy) in rule.0.iter().zip(&rule.1) {
                let z = [w, w * x, w * y];
                face += wx * wy * w * w * 2.0 * spec.phi(norm2(z)) * w / norm2(z);
            }
        }
        let oracle = 6.0 * face;
        assert!((tot - oracle).abs() < 1e-4 * oracle, "{tot} vs {oracle}");
        assert!((oracle - 8.0 * PI).abs() < 0.2);
    }

    #[test]
    fn zero_cell_average_coulomb() {
        // ε = 0: (2/3)·(1/Δv³)∮ R²/2 dω; compare with a brute-force midpoint average.
        let dv = 0.4;
        let s = KernelSampler::new(KernelSpec::coulomb(0.0).unwrap(), dv);
        let m = 200;
        let mut acc = 0.0;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let z = [
                        (i as f64 + 0.5) / m as f64 - 0.5,
                        (j as f64 + 0.5) / m as f64 - 0.5,
                        (k as f64 + 0.5) / m as f64 - 0.5,
                    ];
                    let r2 = norm2(z) * dv * dv;
                    acc += (1.0 - z[0] * z[0] * dv * dv / r2) / r2.sqrt();
                }
            }
        }
        acc /= (m * m * m) as f64;
        assert!((s.a([0, 0, 0])[0] - acc).abs() / acc < 1e-3);
    }
}
