//! The full appendix suite as one deterministic run.

use serde::{Deserialize, Serialize};

use super::continuity::check_entropy_continuity;
use super::corpus::{appendix_corpus, normalized_mixture, normalized_mixture_corpus};
use super::interp::{check_dyadic_equivalence, check_interpolations, INTERP_WEIGHTS};
use super::logineq::{check_log_inequality, log_samples};
use super::oneil::check_oneil;
use super::oscillatory::{log_log_slope, OscillatoryDatum, NORMALIZATION_TOL, SLOPE_SCALES};
use super::report::IneqReport;
use crate::analytics::calibrate_dissipation;
use crate::calibration::DEFAULT_SEED;
use crate::collision::{ConvolutionPlan, KernelSpec};
use crate::error::Result;
use crate::grid::{build_grid, reference_maxwellian, sample_maxwellian, Field};
use crate::solver::{run, RunOptions, SolverConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub log_trials: usize,
    /// Corpus grid half-width and points per axis.
    pub l: f64,
    pub n: usize,
    pub per_family: usize,
    /// Grid for the dissipation and continuity corpora (solver runs).
    pub solver_l: f64,
    pub solver_n: usize,
    /// Half-width for the two-scale data (normalization needs about 8).
    pub oscillatory_l: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            log_trials: 1_000_000,
            l: 8.0,
            n: 32,
            per_family: 6,
            solver_l: 6.0,
            solver_n: 16,
            oscillatory_l: 8.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OscillatoryReport {
    pub scales: Vec<f64>,
    /// Ḣ^{1/2} norms of h₀ on grids with Δv = ε/4.
    pub grid_norms: Vec<f64>,
    pub exact_norms: Vec<f64>,
    pub grid_slope: f64,
    pub exact_slope: f64,
    pub worst_normalization: f64,
}

impl OscillatoryReport {
    /// |slope/(−7/9) − 1|
    pub fn slope_error(&self) -> f64 {
        (self.grid_slope / (-7.0 / 9.0) - 1.0).abs()
    }
}

/// Normalization and Ḣ^{1/2} growth of the two-scale data over `SLOPE_SCALES`.
pub fn oscillatory_study(l: f64) -> Result<OscillatoryReport> {
    let mut grid_norms = Vec::new();
    let mut exact_norms = Vec::new();
    let mut worst: f64 = 0.0;
    for &eps in &SLOPE_SCALES {
        let d = OscillatoryDatum::new(eps)?;
        let n = (2.0 * l / (eps / 4.0)).ceil() as usize;
        let g = build_grid(l, n)?;
        d.check_resolution(&g)?;
        let m = d.check_normalization(&g)?;
        worst = worst
            .max((m.mass - 1.0).abs())
            .max((m.energy - 3.0).abs())
            .max(m.mean.iter().fold(0.0f64, |a, x| a.max(x.abs())));
        grid_norms.push(d.grid_h_dot_norm(&g, 0.5));
        exact_norms.push(d.h_dot_norm(0.5)?);
    }
    let scales = SLOPE_SCALES.to_vec();
    Ok(OscillatoryReport {
        grid_slope: log_log_slope(&scales, &grid_norms),
        exact_slope: log_log_slope(&scales, &exact_norms),
        scales,
        grid_norms,
        exact_norms,
        worst_normalization: worst,
    })
}

/// Pairs (f(t), f(t+δ)) for δ ∈ {0.01, 0.1} from short solver runs, plus a Maxwellian pair and a trivial pair.
pub fn continuity_pairs(l: f64, n: usize, seed: u64) -> Result<Vec<(Field, Field)>> {
    let g = build_grid(l, n)?;
    let plan = ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()));
    let cfg = SolverConfig { t_end: 0.3, sample_interval: 0.01, balance: false, ..Default::default() };
    let opts = RunOptions { keep_snapshots: true, ..Default::default() };
    let mut pairs = Vec::new();
    for f0 in normalized_mixture_corpus(&g, 3, seed)? {
        let tr = run(&f0, &plan, &cfg, &opts)?;
        let s = &tr.snapshots;
        for i in (0..s.len()).step_by(4) {
            for lag in [1, 10] {
                if i + lag < s.len() {
                    pairs.push((s[i].clone(), s[i + lag].clone()));
                }
            }
        }
    }
    let mu = reference_maxwellian(&g);
    pairs.push((mu.clone(), sample_maxwellian(&g, 1.0, [0.0; 3], 1.1)?));
    pairs.push((mu.clone(), mu));
    Ok(pairs)
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub reports: Vec<IneqReport>,
    pub oscillatory: OscillatoryReport,
}

impl SuiteOutcome {
    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(IneqReport::holds)
    }
}

pub fn run_appendix_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let seed = cfg.seed;
    let mut reports = vec![check_log_inequality(&log_samples(cfg.log_trials, 1e6, seed))?];

    let g = build_grid(cfg.l, cfg.n)?;
    let corpus = appendix_corpus(&g, cfg.per_family, seed)?;
    reports.extend(check_oneil(&corpus, seed)?);
    reports.extend(check_interpolations(&corpus, &INTERP_WEIGHTS, seed)?);
    reports.extend(check_dyadic_equivalence(&corpus, &[(0.0, 0.0), (1.0, 0.0), (1.0, 2.0)], seed)?);

    let gs = build_grid(cfg.solver_l, cfg.solver_n)?;
    let plan = ConvolutionPlan::new(gs, KernelSpec::default_for_spacing(gs.spacing()));
    let mut diss = normalized_mixture_corpus(&gs, 2 * cfg.per_family, seed)?;
    diss.push(reference_maxwellian(&gs));
    diss.push(normalized_mixture(&gs, 0.5, [1.0, 0.0, 0.0], 2.0)?);
    let cal = calibrate_dissipation(&diss, &plan, seed)?;
    reports.push(IneqReport::from_fit("dissipation_l3", cal.c0));
    reports.push(IneqReport::from_fit("dissipation_sqrt_h1", cal.cd1));
    reports.push(IneqReport::from_fit("dissipation_l31", cal.cd2));

    reports.push(check_entropy_continuity(&continuity_pairs(cfg.solver_l, cfg.solver_n, seed)?, seed)?);

    let oscillatory = oscillatory_study(cfg.oscillatory_l)?;
    reports.push(IneqReport::direct(
        "oscillatory_normalization",
        &[(oscillatory.worst_normalization, NORMALIZATION_TOL)],
        0.0,
    ));
    Ok(SuiteOutcome { reports, oscillatory })
}
