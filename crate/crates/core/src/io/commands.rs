//! The workflows behind each CLI subcommand; binaries only parse flags and print.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{parse_json, RunConfig, SnapshotPolicy};
use super::normspec::FlavorDefaults;
use super::snapshot::write_snapshot;
use crate::analytics::{ConstantsRegistry, Provenance};
use crate::analytics::calibrate_dissipation;
use crate::calibration::{fit_upper, DEFAULT_SEED};
use crate::collision::{coercivity_pair, ConvolutionPlan, CoercivityRoute, KernelSpec};
use crate::error::{LandauError, Result};
use crate::grid::{build_grid, reference_maxwellian};
use crate::inequality::{
    appendix_corpus, check_interpolations, coercivity_corpus, normalized_mixture, normalized_mixture_corpus,
    CoercivityCase, IneqReport, DIRECT_SLACK, INTERP_WEIGHTS,
};
use crate::ode::{
    blowup_lemma_check, extrapolate_blowup, integrate_master, lifespan_ode, verify_monotonicity, wode_run, BlowupLemmaReport,
    LifespanReport, MasterParams, MonotonicityReport, WodeClass,
};
use crate::solver::{fmt_num, run, RunOptions, Trajectory};

/// Kernel cache directory from `LANDAU_CACHE_DIR`, if set and nonempty.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os("LANDAU_CACHE_DIR").filter(|s| !s.is_empty()).map(PathBuf::from)
}

#[derive(Debug)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub files: Vec<PathBuf>,
    /// Hard failures; a nonempty list means the command must exit nonzero.
    pub failures: Vec<String>,
}

/// Runs the solver and writes `trajectory.csv`, `summary.json`, optional `norms.csv`, and snapshots
/// under `out`. Everything written depends only on the inputs.
pub fn cmd_run(
    cfg: &RunConfig,
    base: &Path,
    out: &Path,
    registry: &ConstantsRegistry,
    cache: Option<&Path>,
) -> Result<RunOutcome> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let spec = cfg.kernel.spec(&grid)?;
    let f0 = cfg.init.build(&grid, base)?;
    let plan = ConvolutionPlan::cached(grid, spec, cache)?;
    let solver = cfg.solver_config();
    let norms = cfg.diagnostics.norm_specs()?;
    let opts = RunOptions {
        registry: registry.clone(),
        unnormalized: false,
        keep_snapshots: !norms.is_empty() || cfg.snapshots == SnapshotPolicy::All,
    };
    let traj = run(&f0, &plan, &solver, &opts)?;

    fs::create_dir_all(out)?;
    let mut files = Vec::new();
    let csv = out.join("trajectory.csv");
    let mut buf = Vec::new();
    traj.write_csv(&mut buf)?;
    fs::write(&csv, buf)?;
    files.push(csv);

    if !norms.is_empty() {
        let path = out.join("norms.csv");
        let mut w = Vec::new();
        let names: Vec<String> = norms.iter().map(|n| n.to_string().replace(',', ";")).collect();
        writeln!(w, "t,{}", names.join(","))?;
        for (rec, f) in traj.records.iter().zip(&traj.snapshots) {
            let vals = norms
                .iter()
                .map(|n| n.eval(f, FlavorDefaults::default()).map(fmt_num))
                .collect::<Result<Vec<_>>>()?;
            writeln!(w, "{},{}", fmt_num(rec.t), vals.join(","))?;
        }
        fs::write(&path, w)?;
        files.push(path);
    }

    let snaps: Vec<(usize, f64, &crate::grid::Field)> = match cfg.snapshots {
        SnapshotPolicy::None => Vec::new(),
        SnapshotPolicy::Final => {
            let last = traj.records.len() - 1;
            vec![(last, traj.records[last].t, &traj.final_field)]
        }
        SnapshotPolicy::All => traj.records.iter().zip(&traj.snapshots).enumerate().map(|(i, (r, f))| (i, r.t, f)).collect(),
    };
    if !snaps.is_empty() {
        let dir = out.join("snapshots");
        fs::create_dir_all(&dir)?;
        for (i, t, f) in snaps {
            let p = dir.join(format!("f_{i:04}.lclf"));
            write_snapshot(&p, f, t)?;
            files.push(p);
        }
    }

    let mut failures = Vec::new();
    if let Some(reason) = &traj.summary.aborted {
        failures.push(format!("run aborted: {reason}"));
    }
    let s = &traj.summary;
    let last = traj.records.last().expect("at least one record");
    let summary = json!({
        "config": cfg,
        "kernel": spec,
        "registry": registry,
        "regime": s.regime,
        "min_f": s.min_f,
        "max_abs_q": s.max_abs_q,
        "steps": s.steps,
        "samples": s.samples,
        "aborted": s.aborted,
        "final": { "t": last.t, "mass": last.mass, "u": last.u, "T": last.temperature, "H": last.h, "D": last.d },
    });
    let path = out.join("summary.json");
    fs::write(&path, serde_json::to_string_pretty(&summary)? + "\n")?;
    files.push(path);
    Ok(RunOutcome { trajectory: traj, files, failures })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrateConfig {
    pub seed: u64,
    /// Grid for the interpolation corpus.
    pub l: f64,
    pub n: usize,
    pub per_family: usize,
    /// Grid for the dissipation corpus.
    pub solver_l: f64,
    pub solver_n: usize,
    /// Grid and count for the coercivity pairs (direct 6-D sums when N ≤ 12).
    pub coercivity_l: f64,
    pub coercivity_n: usize,
    pub coercivity_pairs: usize,
}

impl Default for CalibrateConfig {
    fn default() -> Self {
        CalibrateConfig {
            seed: DEFAULT_SEED,
            l: 8.0,
            n: 32,
            per_family: 6,
            solver_l: 6.0,
            solver_n: 16,
            coercivity_l: 5.0,
            coercivity_n: 10,
            coercivity_pairs: 20,
        }
    }
}

impl CalibrateConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text, "calibration config")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationOutcome {
    pub registry: ConstantsRegistry,
    pub reports: Vec<IneqReport>,
}

impl CalibrationOutcome {
    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(IneqReport::holds)
    }
}

/// Both coercivity sides on each case: the direct check with the stated constant, and a fitted constant.
pub fn coercivity_reports(cases: &[CoercivityCase], seed: u64) -> Result<(IneqReport, IneqReport)> {
    let pairs = cases
        .iter()
        .map(|c| coercivity_pair(&c.f, &c.p, c.m, c.j, CoercivityRoute::Auto).map(|p| (p.lhs, p.rhs)))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        IneqReport::direct("coercivity", &pairs, DIRECT_SLACK),
        IneqReport::from_fit("coercivity_fitted", fit_upper(&pairs, seed)),
    ))
}

/// Fits C0, CD1, CD2, the coercivity constant, and the interpolation constants; the first four are
/// written into `base` as calibrated.
pub fn cmd_calibrate(cfg: &CalibrateConfig, base: &ConstantsRegistry) -> Result<CalibrationOutcome> {
    let seed = cfg.seed;
    let mut registry = base.clone();
    let mut reports = Vec::new();

    let gs = build_grid(cfg.solver_l, cfg.solver_n)?;
    let plan = ConvolutionPlan::new(gs, KernelSpec::default_for_spacing(gs.spacing()));
    let mut diss = normalized_mixture_corpus(&gs, 2 * cfg.per_family, seed)?;
    diss.push(reference_maxwellian(&gs));
    diss.push(normalized_mixture(&gs, 0.5, [1.0, 0.0, 0.0], 2.0)?);
    let cal = calibrate_dissipation(&diss, &plan, seed)?;
    cal.apply(&mut registry)?;
    reports.push(IneqReport::from_fit("dissipation_l3", cal.c0));
    reports.push(IneqReport::from_fit("dissipation_sqrt_h1", cal.cd1));
    reports.push(IneqReport::from_fit("dissipation_l31", cal.cd2));

    let gc = build_grid(cfg.coercivity_l, cfg.coercivity_n)?;
    let cases = coercivity_corpus(&gc, cfg.coercivity_pairs, seed)?;
    let (direct, fitted) = coercivity_reports(&cases, seed)?;
    if let Some(fit) = &fitted.fit {
        registry.set("C_coercive", fit.constant, Provenance::Calibrated)?;
    }
    reports.push(direct);
    reports.push(fitted);

    let g = build_grid(cfg.l, cfg.n)?;
    let corpus = appendix_corpus(&g, cfg.per_family, seed)?;
    reports.extend(check_interpolations(&corpus, &INTERP_WEIGHTS, seed)?);
    Ok(CalibrationOutcome { registry, reports })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdeKind {
    Master,
    Wode,
    Lifespan,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WodeParams {
    /// Y(0)²
    pub y0sq: f64,
    pub t_end: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LifespanParams {
    #[serde(rename = "X0sq")]
    pub x0sq: f64,
    #[serde(default = "default_lifespan_samples")]
    pub samples: usize,
}

fn default_lifespan_samples() -> usize {
    201
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OdeReport {
    Master { blowup: Option<f64>, error_estimate: f64, monotonicity: MonotonicityReport, blowup_lemma: BlowupLemmaReport },
    Wode { classification: WodeClass, trapped_at: Option<f64>, fitted_exponent: Option<f64>, predicted_exponent: f64 },
    Lifespan(LifespanSummary),
}

#[derive(Clone, Debug, Serialize)]
pub struct LifespanSummary {
    pub asymptote: f64,
    pub lifespan: f64,
    pub numeric_blowup: Option<f64>,
    pub below_envelope: bool,
}

impl From<&LifespanReport> for LifespanSummary {
    fn from(r: &LifespanReport) -> Self {
        LifespanSummary {
            asymptote: r.asymptote,
            lifespan: r.lifespan,
            numeric_blowup: r.numeric_blowup,
            below_envelope: r.below_envelope,
        }
    }
}

pub struct OdeOutcome {
    pub csv: String,
    pub report: OdeReport,
    pub failures: Vec<String>,
}

/// Centered differences, one-sided at the ends.
fn derivative(t: &[f64], z: &[f64]) -> Vec<f64> {
    let n = t.len();
    (0..n)
        .map(|i| {
            if n < 2 {
                0.0
            } else {
                let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
                (z[b] - z[a]) / (t[b] - t[a])
            }
        })
        .collect()
}

fn scalar_csv(t: &[f64], z: &[f64], lhs: &[f64], rhs: &[f64]) -> String {
    let mut s = String::from("t,X2,H,D,M,lhs,rhs\n");
    for i in 0..t.len() {
        let cells = [t[i], z[i], f64::NAN, f64::NAN, f64::NAN, lhs[i], rhs[i]];
        s.push_str(&cells.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    s
}

/// Master: CSV of the master inequality sides. Wode: X2 = Y², lhs = dY²/dt + C4(1+t)^{k3}Y^{14/5},
/// rhs = C5(Y⁴ + Y²). Lifespan: X2 = Z, lhs = dZ/dt, rhs = Z^{9/5} + C11.
pub fn cmd_ode(kind: OdeKind, params_json: &str, registry: &ConstantsRegistry) -> Result<OdeOutcome> {
    let mut failures = Vec::new();
    match kind {
        OdeKind::Master => {
            let p: MasterParams = parse_json(params_json, "params")?;
            let traj = integrate_master(&p, registry)?;
            let mut buf = Vec::new();
            traj.write_csv(&mut buf, registry)?;
            let monotonicity = verify_monotonicity(&traj, registry)?;
            if !monotonicity.holds() {
                failures.push(format!("monotone functional: {} violations", monotonicity.violations.len()));
            }
            let blowup_lemma = blowup_lemma_check(&traj, extrapolate_blowup(&traj, registry)?, registry, 40)?;
            if blowup_lemma.applicable && !blowup_lemma.holds() {
                failures.push("blowup bounds violated".into());
            }
            Ok(OdeOutcome {
                csv: String::from_utf8(buf).expect("ascii csv"),
                report: OdeReport::Master { blowup: traj.blowup, error_estimate: traj.error_estimate, monotonicity, blowup_lemma },
                failures,
            })
        }
        OdeKind::Wode => {
            let p: WodeParams = parse_json(params_json, "params")?;
            let rep = wode_run(p.y0sq, registry, p.t_end)?;
            let (c4, c5) = (registry.get("C4"), registry.get("C5"));
            let dz = derivative(&rep.t, &rep.y2);
            let lhs: Vec<f64> = (0..rep.t.len())
                .map(|i| dz[i] + c4 * (1.0 + rep.t[i]).powf(rep.k3) * rep.y2[i].max(0.0).powf(1.4))
                .collect();
            let rhs: Vec<f64> = rep.y2.iter().map(|z| c5 * (z * z + z)).collect();
            Ok(OdeOutcome {
                csv: scalar_csv(&rep.t, &rep.y2, &lhs, &rhs),
                report: OdeReport::Wode {
                    classification: rep.classification,
                    trapped_at: rep.trapped_at,
                    fitted_exponent: rep.fitted_exponent,
                    predicted_exponent: rep.predicted_exponent,
                },
                failures,
            })
        }
        OdeKind::Lifespan => {
            let p: LifespanParams = parse_json(params_json, "params")?;
            let rep = lifespan_ode(p.x0sq, registry, p.samples)?;
            if !rep.below_envelope {
                failures.push("numeric solution exceeds the closed-form envelope".into());
            }
            let lhs = derivative(&rep.t, &rep.numeric);
            let rhs: Vec<f64> = rep.numeric.iter().map(|z| z.max(0.0).powf(1.8) + rep.c11).collect();
            Ok(OdeOutcome {
                csv: scalar_csv(&rep.t, &rep.numeric, &lhs, &rhs),
                report: OdeReport::Lifespan(LifespanSummary::from(&rep)),
                failures,
            })
        }
    }
}

impl std::str::FromStr for OdeKind {
    type Err = LandauError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "master" => Ok(OdeKind::Master),
            "wode" => Ok(OdeKind::Wode),
            "lifespan" => Ok(OdeKind::Lifespan),
            _ => Err(LandauError::Input(format!("unknown ODE {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_writes_outputs_deterministically() {
        let mut cfg = RunConfig::bimodal_default();
        cfg.grid.l = 6.0;
        cfg.grid.n = 12;
        cfg.time.t_end = 0.1;
        cfg.time.sample_interval = 0.05;
        cfg.diagnostics.balance = false;
        cfg.diagnostics.norms = vec!["lp:p=2".into(), "lorentz:p=3,q=1,l=-3".into()];
        let reg = ConstantsRegistry::default();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let ra = cmd_run(&cfg, a.path(), a.path(), &reg, None).unwrap();
        cmd_run(&cfg, b.path(), b.path(), &reg, None).unwrap();
        assert!(ra.failures.is_empty());
        for f in &ra.files {
            let rel = f.strip_prefix(a.path()).unwrap();
            assert_eq!(fs::read(f).unwrap(), fs::read(b.path().join(rel)).unwrap(), "{}", rel.display());
        }
        let norms = fs::read_to_string(a.path().join("norms.csv")).unwrap();
        assert!(norms.starts_with("t,lp:p=2;l=0,lorentz:p=3;q=1;l=-3\n"));
        assert_eq!(norms.lines().count(), 4);
        assert!(a.path().join("snapshots/f_0002.lclf").exists());
    }

    #[test]
    fn ode_commands() {
        let reg = ConstantsRegistry::default();
        let out = cmd_ode(OdeKind::Lifespan, r#"{"X0sq": 3}"#, &reg).unwrap();
        assert!(out.failures.is_empty());
        assert_eq!(out.csv.lines().count(), 202);
        assert!(cmd_ode(OdeKind::Wode, r#"{"y0sq": 1, "t_end": 1, "x": 2}"#, &reg).is_err());
        let p = r#"{"x0": 0.5, "profile": {"kind": "constant", "h": 0.1}, "t_end": 5}"#;
        let out = cmd_ode(OdeKind::Master, p, &reg).unwrap();
        assert!(out.csv.starts_with("t,X2,H,D,M,lhs,rhs\n"));
    }
}
