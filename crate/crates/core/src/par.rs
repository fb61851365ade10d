//! Reductions with a fixed summation tree, independent of the thread count.

use rayon::prelude::*;

const CHUNK: usize = 4096;

/// Sum of `f(i)` for `i in 0..n`, bit-identical for any rayon pool size.
pub fn sum_by<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let mut s = 0.0;
            for i in lo..hi {
                s += f(i);
            }
            s
        })
        .collect();
    partial.iter().sum()
}

pub fn sum(values: &[f64]) -> f64 {
    sum_by(values.len(), |i| values[i])
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    sum_by(a.len(), |i| a[i] * b[i])
}

/// Several sums over the same index range in one pass.
pub fn sums_by<const K: usize, F>(n: usize, f: F) -> [f64; K]
where
    F: Fn(usize) -> [f64; K] + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<[f64; K]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let mut s = [0.0; K];
            for i in lo..hi {
                let v = f(i);
                for k in 0..K {
                    s[k] += v[k];
                }
            }
            s
        })
        .collect();
    let mut out = [0.0; K];
    for p in &partial {
        for k in 0..K {
            out[k] += p[k];
        }
    }
    out
}

pub fn max_by<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(f)
        .reduce(|| f64::NEG_INFINITY, f64::max)
}
