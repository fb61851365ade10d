//! Cubic 3-D complex FFT built from rustfft line transforms.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct Fft3 {
    m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft3").field("m", &self.m).finish()
    }
}

impl Fft3 {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft3 {
            m,
            fwd: planner.plan_fft_forward(m),
            inv: planner.plan_fft_inverse(m),
        }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    /// Unnormalized forward transform, in place.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.run(buf, &self.fwd);
    }

    /// Unnormalized inverse transform, in place (caller divides by m³).
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.run(buf, &self.inv);
    }

    fn run(&self, buf: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let m = self.m;
        assert_eq!(buf.len(), m * m * m);
        let mut tmp = vec![Complex64::new(0.0, 0.0); buf.len()];
        let rows = 64usize;
        for _ in 0..3 {
            buf.par_chunks_mut(m * rows).for_each(|c| {
                let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
                fft.process_with_scratch(c, &mut scratch);
            });
            rotate(buf, &mut tmp, m);
            buf.copy_from_slice(&tmp);
        }
    }
}

/// (x, y, z) -> (y, z, x): the old y axis becomes the fastest.
fn rotate(src: &[Complex64], dst: &mut [Complex64], m: usize) {
    dst.par_chunks_mut(m * m).enumerate().for_each(|(i, slab)| {
        // dst index j + m*(k + m*i) holds src[i + m*(j + m*k)]
        for k in 0..m {
            for j in 0..m {
                slab[j + m * k] = src[i + m * (j + m * k)];
            }
        }
    });
}

/// Flat index of -k on the periodic cube.
#[inline]
pub fn negate_index(idx: usize, m: usize) -> usize {
    let i = idx % m;
    let j = (idx / m) % m;
    let k = idx / (m * m);
    ((m - i) % m) + m * (((m - j) % m) + m * ((m - k) % m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_dft() {
        let m = 4;
        let data: Vec<Complex64> = (0..m * m * m)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut buf = data.clone();
        Fft3::new(m).forward(&mut buf);
        for (kidx, got) in buf.iter().enumerate() {
            let (k0, k1, k2) = (kidx % m, (kidx / m) % m, kidx / (m * m));
            let mut s = Complex64::new(0.0, 0.0);
            for (xidx, v) in data.iter().enumerate() {
                let (x0, x1, x2) = (xidx % m, (xidx / m) % m, xidx / (m * m));
                let ph = -2.0 * std::f64::consts::PI * ((k0 * x0 + k1 * x1 + k2 * x2) as f64) / m as f64;
                s += v * Complex64::new(ph.cos(), ph.sin());
            }
            assert!((s - got).norm() < 1e-12);
        }
    }

    #[test]
    fn roundtrip() {
        let m = 8;
        let data: Vec<Complex64> = (0..m * m * m).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let mut buf = data.clone();
        let f = Fft3::new(m);
        f.forward(&mut buf);
        f.inverse(&mut buf);
        for (a, b) in data.iter().zip(&buf) {
            assert!((a - b / (m * m * m) as f64).norm() < 1e-10);
        }
    }
}
