//! Seeded test corpora: Maxwellians, mixtures, μ-enveloped band-limited noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{sample_maxwellian, Field, VelocityGrid};

/// Temperatures used for the Maxwellian part of the corpus.
pub const CORPUS_TEMPERATURES: [f64; 6] = [0.25, 0.5, 1.0, 1.5, 2.5, 4.0];

/// Maxwellians at `CORPUS_TEMPERATURES` with small random drifts.
pub fn maxwellian_corpus(grid: &VelocityGrid, seed: u64) -> Result<Vec<Field>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CORPUS_TEMPERATURES
        .iter()
        .map(|&t| {
            let u = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
            sample_maxwellian(grid, rng.gen_range(0.5..2.0), u, t)
        })
        .collect()
}

/// Two- and three-component Maxwellian mixtures; nonnegative.
pub fn mixture_corpus(grid: &VelocityGrid, n: usize, seed: u64) -> Result<Vec<Field>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reach = 0.25 * grid.extent();
    (0..n)
        .map(|i| {
            let parts = 2 + i % 2;
            let mut f = Field::zeros(*grid);
            for _ in 0..parts {
                let u = [rng.gen_range(-reach..reach), rng.gen_range(-reach..reach), rng.gen_range(-reach..reach)];
                let t = rng.gen_range(0.3..2.0);
                f = f.add(&sample_maxwellian(grid, rng.gen_range(0.2..1.0), u, t)?)?;
            }
            Ok(f)
        })
        .collect()
}

/// μ_T(v)·(c + Σ a_k cos(k·v + φ_k)) with |k| ≤ 2; `signed` drops the offset c so values change sign.
pub fn noise_corpus(grid: &VelocityGrid, n: usize, signed: bool, seed: u64) -> Result<Vec<Field>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let t = rng.gen_range(0.5..2.0);
            let modes: Vec<([f64; 3], f64, f64)> = (0..4)
                .map(|_| {
                    let k = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
                    (k, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU))
                })
                .collect();
            let offset = if signed { 0.0 } else { modes.iter().map(|m| m.1.abs()).sum::<f64>() + 0.1 };
            let env = sample_maxwellian(grid, 1.0, [0.0; 3], t)?;
            let osc = Field::from_fn(*grid, |v| {
                offset
                    + modes
                        .iter()
                        .map(|(k, a, ph)| a * (k[0] * v[0] + k[1] * v[1] + k[2] * v[2] + ph).cos())
                        .sum::<f64>()
            })?;
            env.zip_map(&osc, |a, b| a * b)
        })
        .collect()
}

/// Maxwellians, mixtures, nonnegative and signed noise.
pub fn appendix_corpus(grid: &VelocityGrid, per_family: usize, seed: u64) -> Result<Vec<Field>> {
    let mut all = maxwellian_corpus(grid, seed)?;
    all.extend(mixture_corpus(grid, per_family, seed.wrapping_add(1))?);
    all.extend(noise_corpus(grid, per_family, false, seed.wrapping_add(2))?);
    all.extend(noise_corpus(grid, per_family, true, seed.wrapping_add(3))?);
    Ok(all)
}

/// Two equal-temperature Maxwellians with mass 1, zero mean and energy 3 in closed form.
pub fn normalized_mixture(grid: &VelocityGrid, w: f64, dir: [f64; 3], a: f64) -> Result<Field> {
    let t = 1.0 - w * (1.0 - w) * a * a / 3.0;
    if !(t > 0.0 && w > 0.0 && w < 1.0) {
        return Err(crate::error::LandauError::Domain(format!("mixture (w = {w}, a = {a}) has no positive temperature")));
    }
    let norm = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    let e = dir.map(|x| x / norm);
    let u1 = e.map(|x| a * (1.0 - w) * x);
    let u2 = e.map(|x| -a * w * x);
    sample_maxwellian(grid, w, u1, t)?.add(&sample_maxwellian(grid, 1.0 - w, u2, t)?)
}

/// Seeded normalized mixtures with w ∈ [0.2, 0.8] and separation a ∈ [0.3, 2].
pub fn normalized_mixture_corpus(grid: &VelocityGrid, n: usize, seed: u64) -> Result<Vec<Field>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let dir = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.1..1.0)];
            normalized_mixture(grid, rng.gen_range(0.2..0.8), dir, rng.gen_range(0.3..2.0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, moments};

    #[test]
    fn mixture_is_normalized() {
        let g = build_grid(8.0, 32).unwrap();
        for f in normalized_mixture_corpus(&g, 5, 3).unwrap() {
            let m = moments(&f);
            assert!((m.rho - 1.0).abs() < 1e-9);
            assert!(m.u.iter().all(|u| u.abs() < 1e-9));
            assert!((m.temperature.unwrap() - 1.0).abs() < 1e-8);
        }
    }
}

/// One (f, p, m, j) case for the coercivity estimate.
#[derive(Clone, Debug)]
pub struct CoercivityCase {
    pub f: Field,
    pub p: Field,
    pub m: f64,
    pub j: usize,
}

/// f from normalized mixtures, p from signed noise, m ∈ [0, 6], j ∈ {0, 1, 2}.
pub fn coercivity_corpus(grid: &VelocityGrid, n: usize, seed: u64) -> Result<Vec<CoercivityCase>> {
    let fs = normalized_mixture_corpus(grid, n, seed)?;
    let ps = noise_corpus(grid, n, true, seed.wrapping_add(7))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(11));
    Ok(fs
        .into_iter()
        .zip(ps)
        .map(|(f, p)| CoercivityCase { f, p, m: rng.gen_range(0.0..6.0), j: rng.gen_range(0..3) })
        .collect())
}
