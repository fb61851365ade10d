//! Time integration with sampled diagnostics.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::balance::{balance_terms_multi, l2_balance_multi, BalanceTerms, L2Balance};
use super::config::{DtPolicy, SolverConfig};
use super::step::{auto_dt, collision_rhs, step_from};
use crate::analytics::formulas::monotone_value;
use crate::analytics::{classify_regime, envelope_bound, ConstantsRegistry, EnvelopeVariant, Regime, RegimeReport};
use crate::collision::{dissipation_from_q, operator_derivative, relative_entropy_to, ConvolutionPlan};
use crate::error::{LandauError, Result};
use crate::grid::{moments, reference_maxwellian, Field};
use crate::norms::{lorentz_norm, LorentzFlavor};

pub const CSV_HEADER: &str = "t,mass,ux,uy,uz,T,H,D,h1_h,l2_h,I1,I2,I3,I4,M,env_upper,lorentz31_m3";

/// Moments of a normalized datum may deviate by this much.
pub const NORMALIZATION_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub u: [f64; 3],
    pub temperature: f64,
    /// H(f | μ)
    pub h: f64,
    pub d: f64,
    /// ‖h‖_{Ḣ¹}
    pub h1_h: f64,
    pub l2_h: f64,
    /// m = 0 balance; absent when balances are switched off.
    pub balance: Option<BalanceTerms>,
    pub weighted: Vec<BalanceTerms>,
    pub l2: Vec<L2Balance>,
    pub m: f64,
    pub env_upper: f64,
    pub lorentz31_m3: f64,
    pub min_f: f64,
    pub max_q: f64,
}

impl DiagnosticsRecord {
    pub fn csv_row(&self) -> String {
        let i = self.balance.map(|b| b.terms).unwrap_or([f64::NAN; 4]);
        let vals = [
            self.t,
            self.mass,
            self.u[0],
            self.u[1],
            self.u[2],
            self.temperature,
            self.h,
            self.d,
            self.h1_h,
            self.l2_h,
            i[0],
            i[1],
            i[2],
            i[3],
            self.m,
            self.env_upper,
            self.lorentz31_m3,
        ];
        vals.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(",")
    }
}

/// Shortest round-trip decimal; `inf`, `-inf`, `nan` for nonfinite values.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:e}")
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub registry: ConstantsRegistry,
    /// Skip the normalization check on f0 (ρ = 1, u = 0, T = 1).
    pub unnormalized: bool,
    pub keep_snapshots: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            registry: ConstantsRegistry::default(),
            unnormalized: false,
            keep_snapshots: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub config: SolverConfig,
    pub wall_time_s: f64,
    pub regime: RegimeReport,
    pub min_f: f64,
    pub max_abs_q: f64,
    pub steps: usize,
    pub samples: usize,
    pub aborted: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub records: Vec<DiagnosticsRecord>,
    /// Snapshot at each record when requested.
    pub snapshots: Vec<Field>,
    pub final_field: Field,
    pub summary: RunSummary,
}

impl Trajectory {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(w, "{}", r.csv_row())?;
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }
}

struct Diagnostician<'a> {
    plan: &'a ConvolutionPlan,
    config: &'a SolverConfig,
    registry: &'a ConstantsRegistry,
    mu: Field,
    k2: f64,
    variant: Option<EnvelopeVariant>,
}

fn seminorm(h: &Field, plan: &ConvolutionPlan) -> f64 {
    (0..3)
        .map(|k| operator_derivative(h, k, plan).l2().powi(2))
        .sum::<f64>()
        .sqrt()
}

impl Diagnostician<'_> {
    fn record(&self, t: f64, f: &Field, q: &Field) -> Result<DiagnosticsRecord> {
        let mom = moments(f);
        let h = f.sub(&self.mu)?;
        let ent = relative_entropy_to(f, 1.0, [0.0; 3], 1.0)?;
        let x = seminorm(&h, self.plan);
        let (balance, weighted, l2) = if self.config.balance {
            let mut ms = vec![0.0];
            ms.extend(self.config.balance_m.iter().copied().filter(|&m| m != 0.0));
            let mut all = balance_terms_multi(f, self.plan, self.config.form, &ms)?;
            let first = all.remove(0);
            let l2ms: Vec<f64> = self.config.balance_m.clone();
            let l2 = if l2ms.is_empty() {
                Vec::new()
            } else {
                l2_balance_multi(f, self.plan, self.config.form, &l2ms)?
            };
            (Some(first), all, l2)
        } else {
            (None, Vec::new(), Vec::new())
        };
        let env_upper = match self.variant {
            Some(v) => envelope_bound(t, ent, None, self.registry, v)?.bound,
            None => f64::NAN,
        };
        Ok(DiagnosticsRecord {
            t,
            mass: mom.rho,
            u: mom.u,
            temperature: mom.temperature.unwrap_or(f64::NAN),
            h: ent,
            d: dissipation_from_q(f, q),
            h1_h: x,
            l2_h: h.l2(),
            balance,
            weighted,
            l2,
            m: monotone_value(ent, x * x, t, self.registry.b_star(), self.k2),
            env_upper,
            lorentz31_m3: lorentz_norm(f, 3.0, 1.0, -3.0, LorentzFlavor::Maximal)?,
            min_f: f.min(),
            max_q: q.max_abs(),
        })
    }
}

fn check_initial(f0: &Field, unnormalized: bool) -> Result<()> {
    if !f0.is_nonnegative() {
        return Err(LandauError::Domain("initial datum must be nonnegative".into()));
    }
    if unnormalized {
        return Ok(());
    }
    let m = moments(f0);
    let t = m.temperature.unwrap_or(f64::NAN);
    let off = (m.rho - 1.0).abs().max(m.u.iter().fold(0.0f64, |a, u| a.max(u.abs()))).max((t - 1.0).abs());
    if !(off <= NORMALIZATION_TOL) {
        return Err(LandauError::Domain(format!(
            "initial datum is not normalized (rho = {}, u = {:?}, T = {t}); flag it as unnormalized",
            m.rho, m.u
        )));
    }
    Ok(())
}

pub fn run(f0: &Field, plan: &ConvolutionPlan, config: &SolverConfig, options: &RunOptions) -> Result<Trajectory> {
    config.validate()?;
    plan.check(f0)?;
    check_initial(f0, options.unnormalized)?;
    let start = Instant::now();
    let registry = &options.registry;
    let mu = reference_maxwellian(f0.grid());
    let rates = registry.rates()?;

    let h0 = relative_entropy_to(f0, 1.0, [0.0; 3], 1.0)?;
    let x0 = seminorm(&f0.sub(&mu)?, plan);
    let regime = classify_regime(h0.max(0.0), x0 * x0, registry)?;
    let variant = match (regime.classification, regime.t_star) {
        (Regime::Stable, _) if h0 > 0.0 => Some(EnvelopeVariant::Stable),
        (Regime::AboveThreshold, Some(ts)) => Some(EnvelopeVariant::PostTstar(ts)),
        _ => None,
    };
    let diag = Diagnostician { plan, config, registry, mu, k2: rates.k2, variant };

    let mut f = f0.clone();
    let mut records = Vec::new();
    let mut snapshots = Vec::new();
    let mut steps = 0;
    let mut aborted = None;
    let n_samples = config.samples();
    let mut min_f = f.min();
    let mut max_q: f64 = 0.0;
    for s in 0..=n_samples {
        let t = s as f64 * config.sample_interval;
        let (coeffs, q) = collision_rhs(&f, plan, config.form)?;
        let rec = diag.record(t, &f, &q)?;
        min_f = min_f.min(rec.min_f);
        max_q = max_q.max(rec.max_q);
        records.push(rec);
        if options.keep_snapshots {
            snapshots.push(f.clone());
        }
        if s == n_samples {
            break;
        }
        let interval = config.sample_interval;
        let dt_target = match config.dt {
            DtPolicy::Fixed(dt) => dt,
            DtPolicy::Auto(_) => auto_dt(&coeffs, config.c_cfl),
        };
        let n_sub = (interval / dt_target).ceil().max(1.0) as usize;
        let dt = interval / n_sub as f64;
        let mut k1 = Some(q);
        let mut failed = false;
        for sub in 0..n_sub {
            let tt = t + sub as f64 * dt;
            match step_from(&f, k1.take(), dt, tt, plan, config) {
                Ok(next) => {
                    f = next;
                    steps += 1;
                    min_f = min_f.min(f.min());
                }
                Err(e @ LandauError::Instability { .. }) => {
                    aborted = Some(e.to_string());
                    failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if failed {
            break;
        }
    }
    let summary = RunSummary {
        config: config.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
        regime,
        min_f,
        max_abs_q: max_q,
        steps,
        samples: records.len(),
        aborted,
    };
    Ok(Trajectory { records, snapshots, final_field: f, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::KernelSpec;
    use crate::grid::build_grid;

    #[test]
    fn header_and_rows() {
        let g = build_grid(6.0, 12).unwrap();
        let plan = ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()));
        let mu = reference_maxwellian(&g);
        let cfg = SolverConfig { t_end: 0.1, sample_interval: 0.05, balance: false, ..Default::default() };
        let tr = run(&mu, &plan, &cfg, &RunOptions::default()).unwrap();
        assert_eq!(tr.records.len(), 3);
        let mut out = Vec::new();
        tr.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), CSV_HEADER.split(',').count());
    }

    #[test]
    fn rejects_unnormalized() {
        let g = build_grid(6.0, 8).unwrap();
        let plan = ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()));
        let f = reference_maxwellian(&g).scale(2.0);
        assert!(run(&f, &plan, &SolverConfig::default(), &RunOptions::default()).is_err());
    }
}
