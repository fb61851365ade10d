//! Sobolev embedding into L^{6,2}, the Lorentz product inequality, and O'Neil's convolution bound.

use rustfft::num_complex::Complex64;
use serde::Serialize;

use super::interp::h1_norm;
use super::report::{IneqReport, DIRECT_SLACK};
use crate::error::Result;
use crate::fft::Fft3;
use crate::grid::Field;
use crate::norms::{lorentz_norm, LorentzFlavor};

fn lor(f: &Field, p: f64, q: f64) -> Result<f64> {
    lorentz_norm(f, p, q, 0.0, LorentzFlavor::Maximal)
}

/// max over lattice points of |Σ_j f_j g_{i−j}| Δv³, the exact sup of the convolution of the
/// cellwise-constant extensions at lattice offsets.
pub fn convolution_max(f: &Field, g: &Field) -> Result<f64> {
    f.same_grid(g)?;
    let grid = f.grid();
    let n = grid.points_per_axis();
    let m = 2 * n;
    let fft = Fft3::new(m);
    let load = |x: &Field| {
        let mut buf = vec![Complex64::new(0.0, 0.0); m * m * m];
        let v = x.values();
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    buf[i + m * (j + m * k)] = Complex64::new(v[grid.index(i, j, k)], 0.0);
                }
            }
        }
        buf
    };
    let (mut a, mut b) = (load(f), load(g));
    fft.forward(&mut a);
    fft.forward(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft.inverse(&mut a);
    let scale = grid.cell_volume() / (m * m * m) as f64;
    Ok(a.iter().map(|c| c.re.abs()).fold(0.0, f64::max) * scale)
}

/// Exponent choices (p, q1, q2) with 1/q1 + 1/q2 ≥ 1; p′ is the conjugate of p.
pub const ONEIL_EXPONENTS: [(f64, f64, f64); 4] = [(2.0, 2.0, 2.0), (3.0, 1.0, f64::INFINITY), (1.5, 2.0, 2.0), (4.0, f64::INFINITY, 1.0)];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvolutionSides {
    pub lhs: f64,
    pub rhs: f64,
}

/// ‖f*g‖_∞ against ‖f‖_{L^{p,q1}}‖g‖_{L^{p′,q2}}.
pub fn oneil_iii_sides(f: &Field, g: &Field, p: f64, q1: f64, q2: f64) -> Result<ConvolutionSides> {
    let pp = p / (p - 1.0);
    Ok(ConvolutionSides { lhs: convolution_max(f, g)?, rhs: lor(f, p, q1)? * lor(g, pp, q2)? })
}

/// (iii) on consecutive corpus pairs and every exponent choice; constant-free.
pub fn check_oneil_iii(corpus: &[Field]) -> Result<IneqReport> {
    let mut pairs = Vec::new();
    for w in corpus.windows(2) {
        for &(p, q1, q2) in &ONEIL_EXPONENTS {
            let s = oneil_iii_sides(&w[0], &w[1], p, q1, q2)?;
            pairs.push((s.lhs, s.rhs));
        }
    }
    Ok(IneqReport::direct("oneil_iii", &pairs, DIRECT_SLACK))
}

/// (i) ‖f‖_{L^{6,2}} ≤ C‖f‖_{H¹}.
pub fn oneil_i_sides(f: &Field) -> Result<(f64, f64)> {
    Ok((lor(f, 6.0, 2.0)?, h1_norm(f)?))
}

/// (ii) with p1 = p2 = 4, q1 = q2 = 4, p = 2, q = 2: ‖fg‖_{L^{2,2}} ≤ C‖f‖_{L^{4,4}}‖g‖_{L^{4,4}}.
pub fn oneil_ii_sides(f: &Field, g: &Field) -> Result<(f64, f64)> {
    let fg = f.zip_map(g, |a, b| a * b)?;
    Ok((lor(&fg, 2.0, 2.0)?, lor(f, 4.0, 4.0)? * lor(g, 4.0, 4.0)?))
}

pub fn check_oneil(corpus: &[Field], seed: u64) -> Result<Vec<IneqReport>> {
    let i: Vec<(f64, f64)> = corpus.iter().map(oneil_i_sides).collect::<Result<_>>()?;
    let ii: Vec<(f64, f64)> = corpus.windows(2).map(|w| oneil_ii_sides(&w[0], &w[1])).collect::<Result<_>>()?;
    Ok(vec![
        IneqReport::fitted_upper("oneil_i", &i, seed),
        IneqReport::fitted_upper("oneil_ii", &ii, seed),
        check_oneil_iii(corpus)?,
    ])
}
