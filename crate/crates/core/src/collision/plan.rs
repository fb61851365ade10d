//! Zero-padded FFT convolution with the kernel family.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rustfft::num_complex::Complex64;

use super::kernel::{KernelSampler, KernelSpec};
use crate::error::{LandauError, Result};
use crate::fft::{negate_index, Fft3};
use crate::grid::{sym_index, Field, VelocityGrid};
use crate::stencil::OperatorStencils;

/// Bumped whenever kernel sampling changes, so stale cache files are ignored.
pub const KERNEL_CACHE_VERSION: u32 = 3;

/// Default accuracy order of the collision-operator stencils.
pub const DEFAULT_ORDER: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    A(usize, usize),
    B(usize),
    C,
}

pub struct ConvolutionPlan {
    grid: VelocityGrid,
    spec: KernelSpec,
    m: usize,
    fft: Fft3,
    a_hat: Vec<Vec<Complex64>>,
    b_hat: Vec<Vec<Complex64>>,
    c_hat: Vec<Complex64>,
    stencils: OperatorStencils,
}

impl std::fmt::Debug for ConvolutionPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConvolutionPlan")
            .field("grid", &self.grid)
            .field("spec", &self.spec)
            .field("m", &self.m)
            .finish()
    }
}

fn displacement(k: usize, n: usize) -> Option<i64> {
    let m = 2 * n;
    if k < n {
        Some(k as i64)
    } else if k > n {
        Some(k as i64 - m as i64)
    } else {
        None
    }
}

impl ConvolutionPlan {
    pub fn new(grid: VelocityGrid, spec: KernelSpec) -> Self {
        Self::with_order(grid, spec, DEFAULT_ORDER)
    }

    pub fn with_order(grid: VelocityGrid, spec: KernelSpec, order: usize) -> Self {
        let n = grid.points_per_axis();
        let m = 2 * n;
        let fft = Fft3::new(m);
        let (a_hat, b_hat, c_hat) = build_transforms(&grid, &spec, &fft);
        ConvolutionPlan {
            grid,
            spec,
            m,
            fft,
            a_hat,
            b_hat,
            c_hat,
            stencils: OperatorStencils::new(order),
        }
    }

    /// Like `new`, reusing kernel transforms stored under `dir` when present.
    pub fn cached(grid: VelocityGrid, spec: KernelSpec, dir: Option<&Path>) -> Result<Self> {
        let Some(dir) = dir else {
            return Ok(Self::new(grid, spec));
        };
        let path = cache_path(dir, &grid, &spec);
        let n = grid.points_per_axis();
        let m = 2 * n;
        if let Ok(bytes) = fs::read(&path) {
            if let Some((a, b, c)) = decode_cache(&bytes, &grid, &spec) {
                return Ok(ConvolutionPlan {
                    grid,
                    spec,
                    m,
                    fft: Fft3::new(m),
                    a_hat: a,
                    b_hat: b,
                    c_hat: c,
                    stencils: OperatorStencils::new(DEFAULT_ORDER),
                });
            }
        }
        let plan = Self::new(grid, spec);
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode_cache(&plan))?;
        drop(f);
        fs::rename(&tmp, &path)?;
        Ok(plan)
    }

    pub fn grid(&self) -> &VelocityGrid {
        &self.grid
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn padded_size(&self) -> usize {
        self.m
    }

    pub fn stencils(&self) -> &OperatorStencils {
        &self.stencils
    }

    pub(crate) fn kernel_hat(&self, which: Which) -> &[Complex64] {
        match which {
            Which::A(i, j) => &self.a_hat[sym_index(i, j)],
            Which::B(i) => &self.b_hat[i],
            Which::C => &self.c_hat,
        }
    }

    pub(crate) fn check(&self, f: &Field) -> Result<()> {
        if f.grid() != &self.grid {
            Err(LandauError::GridMismatch)
        } else {
            Ok(())
        }
    }

    /// Linear convolution `K * f` on the grid nodes, scaled by Δv³.
    pub fn convolve(&self, f: &Field, which: Which) -> Result<Field> {
        self.check(f)?;
        let spec = self.spectra(&[f.values()]);
        let k = self.kernel_hat(which);
        let prod: Vec<Complex64> = spec[0].iter().zip(k).map(|(a, b)| a * b).collect();
        let out = self.outputs(vec![prod]);
        Ok(Field::from_vec(self.grid, out.into_iter().next().expect("one output")))
    }

    /// Spectra of the zero-padded real inputs, transformed two at a time.
    pub(crate) fn spectra(&self, inputs: &[&[f64]]) -> Vec<Vec<Complex64>> {
        let n = self.grid.points_per_axis();
        let m = self.m;
        let mut out = Vec::with_capacity(inputs.len());
        for pair in inputs.chunks(2) {
            let mut buf = vec![Complex64::new(0.0, 0.0); m * m * m];
            for k in 0..n {
                for j in 0..n {
                    for i in 0..n {
                        let src = i + n * (j + n * k);
                        let re = pair[0][src];
                        let im = if pair.len() > 1 { pair[1][src] } else { 0.0 };
                        buf[i + m * (j + m * k)] = Complex64::new(re, im);
                    }
                }
            }
            self.fft.forward(&mut buf);
            if pair.len() == 1 {
                out.push(buf);
            } else {
                let mut x = vec![Complex64::new(0.0, 0.0); buf.len()];
                let mut y = vec![Complex64::new(0.0, 0.0); buf.len()];
                for idx in 0..buf.len() {
                    let p = buf[idx];
                    let q = buf[negate_index(idx, m)].conj();
                    x[idx] = (p + q) * 0.5;
                    y[idx] = (p - q) * Complex64::new(0.0, -0.5);
                }
                out.push(x);
                out.push(y);
            }
        }
        out
    }

    /// Inverse transforms of spectra known to belong to real sequences; returns node values
    /// scaled by Δv³.
    pub(crate) fn outputs(&self, specs: Vec<Vec<Complex64>>) -> Vec<Vec<f64>> {
        let n = self.grid.points_per_axis();
        let m = self.m;
        let scale = self.grid.cell_volume() / (m * m * m) as f64;
        let mut out = Vec::with_capacity(specs.len());
        let mut it = specs.into_iter();
        while let Some(mut s) = it.next() {
            let second = it.next();
            if let Some(t) = &second {
                for (a, b) in s.iter_mut().zip(t) {
                    *a += Complex64::new(-b.im, b.re);
                }
            }
            self.fft.inverse(&mut s);
            let mut re = vec![0.0; n * n * n];
            let mut im = vec![0.0; if second.is_some() { n * n * n } else { 0 }];
            for k in 0..n {
                for j in 0..n {
                    for i in 0..n {
                        let v = s[i + m * (j + m * k)];
                        let dst = i + n * (j + n * k);
                        re[dst] = v.re * scale;
                        if second.is_some() {
                            im[dst] = v.im * scale;
                        }
                    }
                }
            }
            out.push(re);
            if second.is_some() {
                out.push(im);
            }
        }
        out
    }
}

type Transforms = (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>, Vec<Complex64>);

fn build_transforms(grid: &VelocityGrid, spec: &KernelSpec, fft: &Fft3) -> Transforms {
    use rayon::prelude::*;
    let n = grid.points_per_axis();
    let m = 2 * n;
    let sampler = KernelSampler::new(*spec, grid.spacing());
    let total = m * m * m;
    // one slab per z index
    let slabs: Vec<(Vec<[f64; 6]>, Vec<[f64; 3]>, Vec<f64>)> = (0..m)
        .into_par_iter()
        .map(|k| {
            let mut a = vec![[0.0; 6]; m * m];
            let mut b = vec![[0.0; 3]; m * m];
            let mut c = vec![0.0; m * m];
            if let Some(dk) = displacement(k, n) {
                for j in 0..m {
                    let Some(dj) = displacement(j, n) else { continue };
                    for i in 0..m {
                        let Some(di) = displacement(i, n) else { continue };
                        let d = [di, dj, dk];
                        a[i + m * j] = sampler.a(d);
                        b[i + m * j] = sampler.b(d);
                        c[i + m * j] = sampler.c(d);
                    }
                }
            }
            (a, b, c)
        })
        .collect();
    let gather = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); total];
        for (k, slab) in slabs.iter().enumerate() {
            let _ = slab;
            for ij in 0..m * m {
                buf[ij + m * m * k] = Complex64::new(f(k, ij), 0.0);
            }
        }
        fft.forward(&mut buf);
        buf
    };
    let a_hat = (0..6).map(|c| gather(&|k, ij| slabs[k].0[ij][c])).collect();
    let b_hat = (0..3).map(|c| gather(&|k, ij| slabs[k].1[ij][c])).collect();
    let c_hat = gather(&|k, ij| slabs[k].2[ij]);
    (a_hat, b_hat, c_hat)
}

fn cache_path(dir: &Path, grid: &VelocityGrid, spec: &KernelSpec) -> PathBuf {
    dir.join(format!(
        "kernel-v{}-n{}-l{:016x}-e{:016x}-g{:016x}.bin",
        KERNEL_CACHE_VERSION,
        grid.points_per_axis(),
        grid.extent().to_bits(),
        spec.epsilon.to_bits(),
        spec.gamma.to_bits()
    ))
}

const CACHE_MAGIC: &[u8; 4] = b"LKTC";

fn encode_cache(plan: &ConvolutionPlan) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&KERNEL_CACHE_VERSION.to_le_bytes());
    out.extend_from_slice(&(plan.grid.points_per_axis() as u32).to_le_bytes());
    out.extend_from_slice(&plan.grid.extent().to_le_bytes());
    out.extend_from_slice(&plan.spec.epsilon.to_le_bytes());
    out.extend_from_slice(&plan.spec.gamma.to_le_bytes());
    for s in plan.a_hat.iter().chain(&plan.b_hat).chain(std::iter::once(&plan.c_hat)) {
        for z in s {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

fn decode_cache(bytes: &[u8], grid: &VelocityGrid, spec: &KernelSpec) -> Option<Transforms> {
    let mut r = bytes;
    let mut word = [0u8; 4];
    let mut dword = [0u8; 8];
    r.read_exact(&mut word).ok()?;
    if &word != CACHE_MAGIC {
        return None;
    }
    r.read_exact(&mut word).ok()?;
    if u32::from_le_bytes(word) != KERNEL_CACHE_VERSION {
        return None;
    }
    r.read_exact(&mut word).ok()?;
    let n = u32::from_le_bytes(word) as usize;
    if n != grid.points_per_axis() {
        return None;
    }
    for expect in [grid.extent(), spec.epsilon, spec.gamma] {
        r.read_exact(&mut dword).ok()?;
        if f64::from_le_bytes(dword).to_bits() != expect.to_bits() {
            return None;
        }
    }
    let total = 8 * n * n * n;
    if r.len() != 10 * total * 16 {
        return None;
    }
    let mut read_one = || -> Vec<Complex64> {
        let mut v = Vec::with_capacity(total);
        for _ in 0..total {
            let re = f64::from_le_bytes(r[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(r[8..16].try_into().expect("8 bytes"));
            r = &r[16..];
            v.push(Complex64::new(re, im));
        }
        v
    };
    let a: Vec<_> = (0..6).map(|_| read_one()).collect();
    let b: Vec<_> = (0..3).map(|_| read_one()).collect();
    let c = read_one();
    Some((a, b, c))
}
