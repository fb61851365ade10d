//! Terms of the Ḣ¹ and L² energy balances for h = f − μ.

use serde::{Deserialize, Serialize};

use crate::collision::{operator_derivative, Coefficients, ConvolutionPlan, Form, Which};
use crate::error::Result;
use crate::grid::{reference_maxwellian, Field};
use crate::par;

/// Σ_k terms of ½ d/dt ‖∇h‖²_{L²_{m/2}}. For m = 0 these are I1..I4, otherwise W1..W4.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceTerms {
    pub m: f64,
    /// [Q(f,∂h), Q(∂f,h), Q(∂h,μ), Q(h,∂μ)] tested against ⟨v⟩^m ∂h.
    pub terms: [f64; 4],
    /// Σ_k ∫(a*f):∇∂_k h⊗∇∂_k h ⟨v⟩^m
    pub i11: f64,
    /// Σ_k ∫(b*f)·∇∂_k h ∂_k h ⟨v⟩^m
    pub i12: f64,
    /// ⟨∂_k Q(μ,μ), ⟨v⟩^m ∂_k h⟩: what the discrete equilibrium residual adds.
    pub residual: f64,
    /// Σ_k ∫⟨v⟩^m |∂_k h|²
    pub seminorm_sq: f64,
}

impl BalanceTerms {
    pub fn sum(&self) -> f64 {
        self.terms.iter().sum()
    }
}

/// ½ d/dt ‖h‖²_{L²_{m/2}} split as ⟨Q(f,h),⟨v⟩^m h⟩ + ⟨Q(h,μ),⟨v⟩^m h⟩, and −E1−E2+E3 for the first.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct L2Balance {
    pub m: f64,
    pub pair: [f64; 2],
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    /// ⟨Q(μ,μ), ⟨v⟩^m h⟩
    pub residual: f64,
    pub norm_sq: f64,
}

impl L2Balance {
    pub fn sum(&self) -> f64 {
        self.pair[0] + self.pair[1]
    }
}

fn winner(a: &Field, b: &Field, w: &[f64]) -> f64 {
    let (x, y) = (a.values(), b.values());
    par::sum_by(x.len(), |i| x[i] * y[i] * w[i]) * a.grid().cell_volume()
}

struct Parts {
    dh: [Field; 3],
    /// per k: the four Q fields
    q: Vec<[Field; 4]>,
    dq_mumu: [Field; 3],
    cf: Coefficients,
}

fn d3(x: &Field, plan: &ConvolutionPlan) -> [Field; 3] {
    [0, 1, 2].map(|k| operator_derivative(x, k, plan))
}

fn parts(f: &Field, plan: &ConvolutionPlan, form: Form) -> Result<Parts> {
    let mu = reference_maxwellian(f.grid());
    let h = f.sub(&mu)?;
    let dh = d3(&h, plan);
    let df = d3(f, plan);
    let dmu = d3(&mu, plan);
    let cf = Coefficients::new(f, plan, form)?;
    let cmu_h = Coefficients::new(&h, plan, form)?;
    let mut q = Vec::with_capacity(3);
    for k in 0..3 {
        let q1 = cf.apply(&dh[k], plan)?;
        let q2 = Coefficients::new(&df[k], plan, form)?.apply(&h, plan)?;
        let q3 = Coefficients::new(&dh[k], plan, form)?.apply(&mu, plan)?;
        let q4 = cmu_h.apply(&dmu[k], plan)?;
        q.push([q1, q2, q3, q4]);
    }
    let qmm = Coefficients::new(&mu, plan, form)?.apply(&mu, plan)?;
    let dq_mumu = d3(&qmm, plan);
    Ok(Parts { dh, q, dq_mumu, cf })
}

/// Ḣ¹ balance terms for each weight in `ms`, sharing the operator evaluations.
pub fn balance_terms_multi(f: &Field, plan: &ConvolutionPlan, form: Form, ms: &[f64]) -> Result<Vec<BalanceTerms>> {
    let p = parts(f, plan, form)?;
    let g = *f.grid();
    let b: Vec<Field> = (0..3).map(|i| plan.convolve(f, Which::B(i))).collect::<Result<_>>()?;
    // ∇∂_k h
    let ddh: Vec<[Field; 3]> = p.dh.iter().map(|x| d3(x, plan)).collect();
    Ok(ms
        .iter()
        .map(|&m| {
            let w = g.weight(m);
            let mut terms = [0.0; 4];
            let mut residual = 0.0;
            let mut seminorm_sq = 0.0;
            let mut i11 = 0.0;
            let mut i12 = 0.0;
            for k in 0..3 {
                for (t, qf) in terms.iter_mut().zip(&p.q[k]) {
                    *t += winner(qf, &p.dh[k], &w);
                }
                residual += winner(&p.dq_mumu[k], &p.dh[k], &w);
                seminorm_sq += winner(&p.dh[k], &p.dh[k], &w);
                let grad = &ddh[k];
                let n = g.len();
                let dv3 = g.cell_volume();
                i11 += par::sum_by(n, |idx| {
                    let mut s = 0.0;
                    for i in 0..3 {
                        for j in 0..3 {
                            s += p.cf.a(i, j)[idx] * grad[i].values()[idx] * grad[j].values()[idx];
                        }
                    }
                    s * w[idx]
                }) * dv3;
                i12 += par::sum_by(n, |idx| {
                    let s: f64 = (0..3).map(|i| b[i].values()[idx] * grad[i].values()[idx]).sum();
                    s * p.dh[k].values()[idx] * w[idx]
                }) * dv3;
            }
            BalanceTerms { m, terms, i11, i12, residual, seminorm_sq }
        })
        .collect())
}

pub fn balance_terms(f: &Field, plan: &ConvolutionPlan, form: Form, m: f64) -> Result<BalanceTerms> {
    Ok(balance_terms_multi(f, plan, form, &[m])?.remove(0))
}

/// L² balance for each weight in `ms`.
pub fn l2_balance_multi(f: &Field, plan: &ConvolutionPlan, form: Form, ms: &[f64]) -> Result<Vec<L2Balance>> {
    let g = *f.grid();
    let mu = reference_maxwellian(&g);
    let h = f.sub(&mu)?;
    let cf = Coefficients::new(f, plan, form)?;
    let qfh = cf.apply(&h, plan)?;
    let qhmu = Coefficients::new(&h, plan, form)?.apply(&mu, plan)?;
    let qmm = Coefficients::new(&mu, plan, form)?.apply(&mu, plan)?;
    let dh = d3(&h, plan);
    let b: Vec<Field> = (0..3).map(|i| plan.convolve(f, Which::B(i))).collect::<Result<_>>()?;
    let n = g.len();
    let dv3 = g.cell_volume();
    let hv = h.values();
    Ok(ms
        .iter()
        .map(|&m| {
            let w = g.weight(m);
            // ∂_i ⟨v⟩^m = m v_i ⟨v⟩^{m-2}
            let dw = |idx: usize, i: usize| m * g.velocity(idx)[i] * g.bracket(idx).powf(m - 2.0);
            let e1 = par::sum_by(n, |idx| {
                let mut s = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        s += cf.a(i, j)[idx] * dh[i].values()[idx] * dh[j].values()[idx];
                    }
                }
                s * w[idx]
            }) * dv3;
            let e2 = par::sum_by(n, |idx| {
                let mut s = 0.0;
                for i in 0..3 {
                    let di = dw(idx, i);
                    for j in 0..3 {
                        s += cf.a(i, j)[idx] * dh[j].values()[idx] * di;
                    }
                }
                s * hv[idx]
            }) * dv3;
            let e3 = par::sum_by(n, |idx| {
                let s: f64 = (0..3)
                    .map(|i| b[i].values()[idx] * (dw(idx, i) * hv[idx] + w[idx] * dh[i].values()[idx]))
                    .sum();
                s * hv[idx]
            }) * dv3;
            L2Balance {
                m,
                pair: [winner(&qfh, &h, &w), winner(&qhmu, &h, &w)],
                e1,
                e2,
                e3,
                residual: winner(&qmm, &h, &w),
                norm_sq: winner(&h, &h, &w),
            }
        })
        .collect())
}

pub fn l2_balance(f: &Field, plan: &ConvolutionPlan, form: Form, m: f64) -> Result<L2Balance> {
    Ok(l2_balance_multi(f, plan, form, &[m])?.remove(0))
}

/// Σ_k ∫⟨v⟩^m |∂_k h|² with the operator derivative.
pub fn weighted_seminorm_sq(f: &Field, plan: &ConvolutionPlan, m: f64) -> Result<f64> {
    let mu = reference_maxwellian(f.grid());
    let h = f.sub(&mu)?;
    let w = f.grid().weight(m);
    Ok(d3(&h, plan).iter().map(|d| winner(d, d, &w)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::KernelSpec;
    use crate::grid::{build_grid, sample_maxwellian};

    #[test]
    fn equilibrium_terms_vanish() {
        let g = build_grid(6.0, 12).unwrap();
        let plan = ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()));
        let mu = reference_maxwellian(&g);
        let t = balance_terms(&mu, &plan, Form::Divergence, 0.0).unwrap();
        assert!(t.terms.iter().all(|x| x.abs() < 1e-8));
        let l = l2_balance(&mu, &plan, Form::Divergence, 4.0).unwrap();
        assert!(l.pair.iter().all(|x| x.abs() < 1e-8));
    }

    #[test]
    fn e1_nonnegative_and_split_consistent() {
        let g = build_grid(6.0, 16).unwrap();
        let plan = ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()));
        let a = sample_maxwellian(&g, 0.5, [0.9, 0.0, 0.0], 2.0 / 3.0).unwrap();
        let b = sample_maxwellian(&g, 0.5, [-0.9, 0.0, 0.0], 2.0 / 3.0).unwrap();
        let f = a.add(&b).unwrap();
        let l = l2_balance(&f, &plan, Form::Divergence, 4.0).unwrap();
        assert!(l.e1 >= 0.0);
        let split = -l.e1 - l.e2 + l.e3;
        assert!((split - l.pair[0]).abs() < 0.1 * l.pair[0].abs(), "{split} {}", l.pair[0]);
        let t = balance_terms(&f, &plan, Form::Divergence, 0.0).unwrap();
        assert!(t.i11 >= 0.0);
        let i1 = -t.i11 + t.i12;
        assert!((i1 - t.terms[0]).abs() < 0.1 * t.terms[0].abs(), "{i1} {}", t.terms[0]);
    }
}
