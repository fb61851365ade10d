//! Sobolev norms: Fourier multipliers on the zero-padded field, or sums of grid derivatives.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::error::{LandauError, Result};
use crate::fft::Fft3;
use crate::grid::{axis_derivative, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SobolevFlavor {
    /// (∫ |ξ|^{2m} |f̂|² dξ/(2π)³)^{1/2}
    Homogeneous,
    /// (Σ_{|α|≤m} ‖∂^α(f⟨v⟩^l)‖²_{L²})^{1/2}
    Weighted,
}

pub fn sobolev_norm(f: &Field, m: f64, l: f64, flavor: SobolevFlavor) -> Result<f64> {
    match flavor {
        SobolevFlavor::Homogeneous => {
            let w = if l == 0.0 { f.clone() } else { f.weighted(&f.grid().weight(l)) };
            spectral_norm(&w, |xi2| if m == 0.0 { 1.0 } else { xi2.powf(m) })
        }
        SobolevFlavor::Weighted => {
            if !(m >= 0.0 && m.fract() == 0.0) {
                return Err(LandauError::Domain(format!(
                    "weighted Sobolev flavor needs a nonnegative integer order, got {m}"
                )));
            }
            Ok(weighted_sum_sq(f, m as usize, l).sqrt())
        }
    }
}

/// (∫ w(|ξ|²) |f̂(ξ)|² dξ/(2π)³)^{1/2}, DFT of the field zero-padded to 2N per axis.
pub fn spectral_norm<W: Fn(f64) -> f64>(f: &Field, weight: W) -> Result<f64> {
    let g = f.grid();
    let n = g.points_per_axis();
    let m = 2 * n;
    let fft = Fft3::new(m);
    let mut buf = vec![Complex64::new(0.0, 0.0); m * m * m];
    let v = f.values();
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                buf[i + m * (j + m * k)] = Complex64::new(v[g.index(i, j, k)], 0.0);
            }
        }
    }
    fft.forward(&mut buf);
    let dk = 2.0 * PI / (m as f64 * g.spacing());
    let freq = |i: usize| {
        let s = if i <= m / 2 { i as f64 } else { i as f64 - m as f64 };
        s * dk
    };
    let dv3 = g.cell_volume();
    let mut total = 0.0;
    for k in 0..m {
        let zk = freq(k).powi(2);
        let mut plane = 0.0;
        for j in 0..m {
            let yk = freq(j).powi(2);
            let mut row = 0.0;
            for i in 0..m {
                let xi2 = freq(i).powi(2) + yk + zk;
                let amp = buf[i + m * (j + m * k)].norm_sqr();
                if amp == 0.0 {
                    continue;
                }
                let w = weight(xi2);
                if !w.is_finite() {
                    return Err(LandauError::Domain(
                        "Fourier weight is singular at a nonzero mode".into(),
                    ));
                }
                row += w * amp;
            }
            plane += row;
        }
        total += plane;
    }
    // Σ |F|² Δv⁶ Δξ³ / (2π)³ with Δξ = 2π/(MΔv)
    let scale = dv3 * dv3 * dk.powi(3) / (8.0 * PI * PI * PI);
    Ok((total * scale).sqrt())
}

fn weighted_sum_sq(f: &Field, m: usize, l: f64) -> f64 {
    let base = if l == 0.0 { f.clone() } else { f.weighted(&f.grid().weight(l)) };
    let mut total = 0.0;
    for a in 0..=m {
        for b in 0..=(m - a) {
            for c in 0..=(m - a - b) {
                let d = partial(&base, [a, b, c]);
                total += d.l2().powi(2);
            }
        }
    }
    total
}

/// ∂^α with the grid's 4th-order stencils.
fn partial(f: &Field, alpha: [usize; 3]) -> Field {
    let mut out = f.clone();
    for (axis, &k) in alpha.iter().enumerate() {
        for _ in 0..k / 2 {
            out = axis_derivative(&out, axis, 2);
        }
        if k % 2 == 1 {
            out = axis_derivative(&out, axis, 1);
        }
    }
    out
}
