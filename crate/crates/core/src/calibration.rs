//! Fitting a constant C so that lhs ≤ C·rhs: seeded 50/50 split, fit on train, check on test.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const INFLATION: f64 = 1.1;

/// Relative allowance for roundoff when counting violations.
pub const ROUNDOFF: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    /// Fitted constant after inflation.
    pub constant: f64,
    pub seed: u64,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub violations: usize,
    /// max over the test split of lhs/(C·rhs)
    pub worst_ratio: f64,
}

/// Seeded shuffle of 0..n split in half (train gets the extra element).
pub fn split(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test = idx.split_off(n.div_ceil(2));
    idx.sort_unstable();
    let mut test = test;
    test.sort_unstable();
    (idx, test)
}

/// Fit C in lhs ≤ C·rhs. Pairs with rhs = 0 and lhs = 0 are ignored while fitting.
pub fn fit_upper(pairs: &[(f64, f64)], seed: u64) -> Fit {
    let (train, test) = split(pairs.len(), seed);
    let raw = train
        .iter()
        .map(|&i| pairs[i])
        .filter(|&(l, r)| r > 0.0 && l > 0.0)
        .map(|(l, r)| l / r)
        .fold(0.0f64, f64::max);
    let constant = raw * INFLATION;
    let (violations, worst_ratio) = evaluate(pairs, &test, constant);
    Fit {
        constant,
        seed,
        train,
        test,
        violations,
        worst_ratio,
    }
}

/// Fit c in lhs ≥ c·rhs; returned `constant` is c, the ratio reported is (c·rhs)/lhs.
pub fn fit_lower(pairs: &[(f64, f64)], seed: u64) -> Fit {
    let flipped: Vec<(f64, f64)> = pairs.iter().map(|&(l, r)| (r, l)).collect();
    let up = fit_upper(&flipped, seed);
    Fit {
        constant: if up.constant > 0.0 { 1.0 / up.constant } else { f64::INFINITY },
        ..up
    }
}

fn evaluate(pairs: &[(f64, f64)], idx: &[usize], c: f64) -> (usize, f64) {
    let mut bad = 0;
    let mut worst = 0.0f64;
    for &i in idx {
        let (l, r) = pairs[i];
        let cap = c * r;
        if l > cap * (1.0 + ROUNDOFF) + f64::MIN_POSITIVE {
            bad += 1;
        }
        if cap > 0.0 {
            worst = worst.max(l / cap);
        } else if l > 0.0 {
            worst = f64::INFINITY;
        }
    }
    (bad, worst)
}
