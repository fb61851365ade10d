//! Acceptance checks, one PASS/FAIL line per criterion. Tolerances are pinned below.
//!
//! Exit status is nonzero when a criterion fails, except for failures listed in `KNOWN`, whose
//! failing sub-checks must match the recorded values exactly (a known failure that changes is an error).

use std::time::Instant;

use landau_core::analytics::{
    blowup_function, classify_regime, decay_exponent, envelope_prefactor, t_star, ConstantsRegistry, Provenance,
};
use landau_core::collision::{
    coercivity_pair, entropy_dissipation, landau_q, CoercivityRoute, ConvolutionPlan, DissipationMethod, Form,
    KernelSpec,
};
use landau_core::grid::{build_grid, reference_maxwellian, Field, VelocityGrid};
use landau_core::inequality::{
    coercivity_corpus, mixture_corpus, noise_corpus, normalized_mixture, oscillatory_study, run_appendix_suite,
    SuiteConfig,
};
use landau_core::norms::{lorentz_norm, lp_norm, sobolev_norm, LorentzFlavor, SobolevFlavor};
use landau_core::ode::{
    calibrate_c6, check_monotone_samples, integrate_master, survival_registry, verify_monotonicity, wode_run, HProfile,
    MasterParams, WodeClass, LARGE_Y0, SMALL_Y0,
};
use landau_core::solver::{run, RunOptions, SolverConfig, Trajectory};

// criterion 1
const RESIDUAL_MAX: f64 = 5e-3;
const RESIDUAL_ORDER_MIN: f64 = 1.5;
// criterion 2
const MASS_DRIFT_MAX: f64 = 1e-12;
const MOMENT_DRIFT_MAX: f64 = 1e-3;
const PROJECTED_DRIFT_MAX: f64 = 1e-10;
// criterion 3
const ENTROPY_IDENTITY_MAX: f64 = 0.05;
// criterion 4
const DISSIPATION_FLOOR: f64 = -1e-12;
const FORM_AGREEMENT_MAX: f64 = 0.05;
// criterion 5
const BALANCE_MAX: f64 = 0.02;
// criterion 6
const ROUTE_AGREEMENT_MAX: f64 = 1e-6;
// criterion 7
const C6_SLACK: f64 = 1.1;
// criterion 8
const Q_LITERAL: f64 = -2.27798;
const K2_LITERAL: f64 = 4.55596;
const K_LITERAL: f64 = 0.42239;
// criterion 9
const L1_INF_TOL: f64 = 1e-12;
const LPP_TOL: f64 = 1e-10;
const BALL_TOL: f64 = 1e-10;
// criterion 11
const NORMALIZATION_MAX: f64 = 1e-8;
const SLOPE_REL_MAX: f64 = 0.2;
// criterion 12
const EXPONENT_REL_MAX: f64 = 0.15;

/// Criteria expected to fail and the sub-checks responsible.
const KNOWN: &[(u32, &[&str])] = &[(8, &["q_55,99/4 literal", "k2 literal"])];

struct Outcome {
    pass: bool,
    detail: String,
    /// Names of failing sub-checks.
    failed: Vec<String>,
}

struct Checks {
    items: Vec<(String, bool, String)>,
}

impl Checks {
    fn new() -> Self {
        Checks { items: Vec::new() }
    }

    fn add(&mut self, name: &str, ok: bool, value: String) {
        self.items.push((name.to_string(), ok, value));
    }

    fn outcome(self) -> Outcome {
        let failed: Vec<String> = self.items.iter().filter(|c| !c.1).map(|c| c.0.clone()).collect();
        let detail = self
            .items
            .iter()
            .map(|(n, ok, v)| format!("{n}={v}{}", if *ok { "" } else { "(!)" }))
            .collect::<Vec<_>>()
            .join("; ");
        Outcome { pass: failed.is_empty(), detail, failed }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn plan_for(g: VelocityGrid) -> ConvolutionPlan {
    ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()))
}

fn residual(n: usize) -> f64 {
    let g = build_grid(8.0, n).unwrap();
    let plan = plan_for(g);
    let mu = reference_maxwellian(&g);
    landau_q(&mu, &mu, &plan, Form::Divergence).unwrap().l2() / mu.l2()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let r32 = residual(32);
    let t32 = start.elapsed().as_secs_f64();
    let r64 = residual(64);
    let order = (r32 / r64).log2();
    let mut c = Checks::new();
    c.add("residual_N32", r32 <= RESIDUAL_MAX, format!("{r32:.3e}"));
    c.add("residual_N64", r64 < r32, format!("{r64:.3e}"));
    c.add("order", order >= RESIDUAL_ORDER_MIN, format!("{order:.2}"));
    c.add("runtime_N32_s", t32 <= 60.0, format!("{t32:.1}"));
    c.outcome()
}

fn bimodal(g: &VelocityGrid) -> Field {
    normalized_mixture(g, 0.5, [1.0, 0.0, 0.0], 2.0).unwrap()
}

fn drifts(tr: &Trajectory) -> (f64, f64, f64) {
    let r0 = &tr.records[0];
    let e = |r: &landau_core::solver::DiagnosticsRecord| {
        0.5 * r.mass * (r.u.iter().map(|x| x * x).sum::<f64>() + 3.0 * r.temperature)
    };
    let (mut dm, mut du, mut de) = (0.0f64, 0.0f64, 0.0f64);
    for r in &tr.records {
        dm = dm.max(rel(r.mass, r0.mass));
        // momentum relative to the thermal speed √T0 of the normalized datum
        let dmom = (0..3).map(|i| (r.mass * r.u[i] - r0.mass * r0.u[i]).powi(2)).sum::<f64>().sqrt();
        du = du.max(dmom / (r0.mass * r0.temperature.sqrt()));
        de = de.max(rel(e(r), e(r0)));
    }
    (dm, du, de)
}

struct Runs {
    unprojected: Trajectory,
    projected: Trajectory,
    seconds: f64,
}

fn bimodal_runs() -> Runs {
    let start = Instant::now();
    let g = build_grid(8.0, 32).unwrap();
    let plan = plan_for(g);
    let f0 = bimodal(&g);
    let off = SolverConfig { projection: false, balance: false, ..SolverConfig::default() };
    let unprojected = run(&f0, &plan, &off, &RunOptions::default()).unwrap();
    let on = SolverConfig { balance_m: vec![4.0], ..SolverConfig::default() };
    let projected = run(&f0, &plan, &on, &RunOptions::default()).unwrap();
    Runs { unprojected, projected, seconds: start.elapsed().as_secs_f64() }
}

fn c2(runs: &Runs) -> Outcome {
    let (dm, du, de) = drifts(&runs.unprojected);
    let (pm, pu, pe) = drifts(&runs.projected);
    let mut c = Checks::new();
    c.add("off_mass", dm <= MASS_DRIFT_MAX, format!("{dm:.1e}"));
    c.add("off_momentum", du <= MOMENT_DRIFT_MAX, format!("{du:.1e}"));
    c.add("off_energy", de <= MOMENT_DRIFT_MAX, format!("{de:.1e}"));
    let worst = pm.max(pu).max(pe);
    c.add("on_all", worst <= PROJECTED_DRIFT_MAX, format!("{worst:.1e}"));
    c.add("runtime_s", runs.seconds <= 300.0, format!("{:.0}", runs.seconds));
    c.outcome()
}

fn c3(runs: &Runs) -> Outcome {
    let r = &runs.projected.records;
    let increasing = r.windows(2).filter(|w| !(w[1].h < w[0].h)).count();
    let mut worst = 0.0f64;
    for i in 1..r.len() - 1 {
        let dhdt = (r[i + 1].h - r[i - 1].h) / (r[i + 1].t - r[i - 1].t);
        worst = worst.max((dhdt + r[i].d).abs() / r[i].d.max(1e-6));
    }
    let mut c = Checks::new();
    c.add("nonstrict_steps", increasing == 0, increasing.to_string());
    c.add("identity", worst <= ENTROPY_IDENTITY_MAX, format!("{worst:.2e}"));
    c.outcome()
}

fn c4() -> Outcome {
    let g = build_grid(5.0, 8).unwrap();
    let plan = plan_for(g);
    let mut fields = mixture_corpus(&g, 25, 41).unwrap();
    fields.extend(noise_corpus(&g, 25, false, 42).unwrap());
    let mut min_d = f64::INFINITY;
    for f in &fields {
        min_d = min_d.min(entropy_dissipation(f, &plan, DissipationMethod::Double).unwrap());
    }
    let g12 = build_grid(5.0, 12).unwrap();
    let plan12 = plan_for(g12);
    let f = bimodal(&g12);
    let single = entropy_dissipation(&f, &plan12, DissipationMethod::Single).unwrap();
    let double = entropy_dissipation(&f, &plan12, DissipationMethod::Double).unwrap();
    let gap = rel(single, double);
    let mut c = Checks::new();
    c.add("fields", fields.len() == 50, fields.len().to_string());
    c.add("min_double_D", min_d >= DISSIPATION_FLOOR, format!("{min_d:.3e}"));
    c.add("single_vs_double", gap <= FORM_AGREEMENT_MAX, format!("{gap:.2e}"));
    c.outcome()
}

fn c5(runs: &Runs) -> Outcome {
    let r = &runs.projected.records;
    let mut worst = [0.0f64; 2];
    for i in 1..r.len() - 1 {
        let dt = r[i + 1].t - r[i - 1].t;
        let pairs = [
            (r[i - 1].balance.unwrap(), r[i].balance.unwrap(), r[i + 1].balance.unwrap()),
            (r[i - 1].weighted[0], r[i].weighted[0], r[i + 1].weighted[0]),
        ];
        for (k, (a, b, c)) in pairs.iter().enumerate() {
            let fd = (c.seminorm_sq - a.seminorm_sq) / dt;
            let model = 2.0 * b.sum();
            worst[k] = worst[k].max((fd - model).abs() / model.abs());
        }
    }
    let m4 = r[0].weighted[0].m;
    let mut c = Checks::new();
    c.add("m0", worst[0] <= BALANCE_MAX, format!("{:.2e}", worst[0]));
    c.add("m4", worst[1] <= BALANCE_MAX && m4 == 4.0, format!("{:.2e}", worst[1]));
    c.outcome()
}

fn c6() -> Outcome {
    let g = build_grid(5.0, 10).unwrap();
    let cases = coercivity_corpus(&g, 20, 61).unwrap();
    let mut violations = 0;
    let mut worst = 0.0f64;
    for k in &cases {
        let p = coercivity_pair(&k.f, &k.p, k.m, k.j, CoercivityRoute::Direct).unwrap();
        worst = worst.max(p.lhs / p.rhs);
        if p.lhs > p.rhs {
            violations += 1;
        }
    }
    let mu = reference_maxwellian(&g);
    let mut route_gap = 0.0f64;
    for k in cases.iter().take(3) {
        let a = coercivity_pair(&mu, &k.p, k.m, k.j, CoercivityRoute::Direct).unwrap();
        let b = coercivity_pair(&mu, &k.p, k.m, k.j, CoercivityRoute::Convolution).unwrap();
        route_gap = route_gap.max(rel(b.rhs, a.rhs));
    }
    let mut c = Checks::new();
    c.add("violations", violations == 0 && cases.len() == 20, format!("{violations}/20"));
    c.add("worst_lhs_over_rhs", true, format!("{worst:.2e}"));
    c.add("route_gap", route_gap <= ROUTE_AGREEMENT_MAX, format!("{route_gap:.1e}"));
    c.outcome()
}

fn sweep_registry(k1: f64, k2: f64, b_star: f64, c1: f64) -> ConstantsRegistry {
    let mut r = ConstantsRegistry::default().with_rates(k1, k2).unwrap();
    r.set("C1", c1, Provenance::User).unwrap();
    r.set("B_star", b_star, Provenance::User).unwrap();
    r
}

fn solver_monotone(f0: &Field, plan: &ConvolutionPlan) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let cfg = SolverConfig { t_end: 1.0, sample_interval: 0.02, balance: false, ..SolverConfig::default() };
    let tr = run(f0, plan, &cfg, &RunOptions::default()).unwrap();
    let t = tr.records.iter().map(|r| r.t).collect();
    let h = tr.records.iter().map(|r| r.h).collect();
    let x2 = tr.records.iter().map(|r| r.h1_h * r.h1_h).collect();
    (t, h, x2)
}

fn c7() -> Outcome {
    let mut trajectories = 0;
    let mut violations = 0;
    let mut points = 0;
    let profiles = [
        HProfile::Exponential { h0: 0.5, rate: 1.0 },
        HProfile::Exponential { h0: 2.0, rate: 0.3 },
        HProfile::Table { t: vec![0.0, 1.0, 3.0, 10.0], h: vec![1.0, 0.4, 0.35, 0.0] },
        HProfile::Constant { h: 0.2 },
    ];
    for (i, k2) in [3.6, 4.0, 4.556184486, 5.0, 6.0].into_iter().enumerate() {
        for k1 in [1.0, 3.643034115] {
            for (b_star, c1) in [(1.0, 1.0), (7f64.exp(), 0.5)] {
                points += 1;
                let reg = sweep_registry(k1, k2, b_star, c1);
                for (j, profile) in profiles.iter().enumerate() {
                    let x0 = [0.3, 1.0, 2.0][(i + j) % 3];
                    let p = MasterParams { x0, profile: profile.clone(), t_end: 10.0, samples: 201, rtol: 1e-10 };
                    let traj = integrate_master(&p, &reg).unwrap();
                    trajectories += 1;
                    violations += verify_monotonicity(&traj, &reg).unwrap().violations.len();
                }
            }
        }
    }
    // solver trajectories: C6 is calibrated on the set of runs, then every run is verified
    let reg = ConstantsRegistry::default();
    let g = build_grid(6.0, 16).unwrap();
    let plan = plan_for(g);
    let runs = [
        solver_monotone(&bimodal(&g), &plan),
        solver_monotone(&normalized_mixture(&g, 0.3, [1.0, 1.0, 0.0], 1.5).unwrap(), &plan),
    ];
    let fits: Vec<Option<f64>> =
        runs.iter().map(|(t, h, x)| calibrate_c6(t, h, x, &reg, C6_SLACK).unwrap()).collect();
    let c6 = fits.iter().copied().try_fold(f64::INFINITY, |acc, f| f.map(|v| acc.min(v)));
    let count = |c6: f64| -> usize {
        runs.iter().map(|(t, h, x)| check_monotone_samples(t, h, x, &reg, c6).unwrap().violations.len()).sum()
    };
    let solver_violations = c6.map_or(usize::MAX, count);
    // informational: C6 fitted on the first run alone, applied to the second
    let transfer = fits[0].map_or(usize::MAX, |c| {
        let (t, h, x) = &runs[1];
        check_monotone_samples(t, h, x, &reg, c).unwrap().violations.len()
    });
    let mut c = Checks::new();
    c.add("sweep_points", points == 20, points.to_string());
    c.add("ode_violations", violations == 0, format!("{violations}/{trajectories} trajectories"));
    c.add("solver_c6", c6.is_some(), format!("{:.3e}", c6.unwrap_or(f64::NAN)));
    c.add("solver_violations", solver_violations == 0, format!("{solver_violations}/{}", 2 * (runs[0].0.len() - 1)));
    c.add("info_first_run_fit_on_second", true, transfer.to_string());
    c.outcome()
}

fn c8() -> Outcome {
    // rational oracles: a = 4732/954 at ℓ = 55
    let q_oracle = -43466.0 / 19080.0;
    let k2_oracle = 43466.0 / 9540.0;
    let k_oracle = 20152.0 / 47700.0;
    let q = decay_exponent(55.0, 99.0 / 4.0).unwrap();
    let rates = ConstantsRegistry::default().rates().unwrap();
    let ts = t_star(10.0, 1.0, 1.0, 0.2);
    let ts_oracle = 10f64.powf(5.0 / 6.0) - 1.0;
    let pre = envelope_prefactor();
    let pre_oracle = 1.0 / (0.4f64.sqrt().sqrt() * 0.4);
    let b = blowup_function(1.0, 1.0);
    let mut c = Checks::new();
    c.add("q_oracle", (q - q_oracle).abs() < 1e-12, format!("{q:.9}"));
    c.add("k2_oracle", (rates.k2 - k2_oracle).abs() < 1e-12, format!("{:.9}", rates.k2));
    c.add("k_oracle", (rates.k - k_oracle).abs() < 1e-12, format!("{:.9}", rates.k));
    c.add("q_55,99/4 literal", (q - Q_LITERAL).abs() <= 1e-5, format!("off {:.2e}", (q - Q_LITERAL).abs()));
    c.add("k2 literal", (rates.k2 - K2_LITERAL).abs() <= 1e-5, format!("off {:.2e}", (rates.k2 - K2_LITERAL).abs()));
    c.add("k literal", (rates.k - K_LITERAL).abs() <= 1e-4, format!("off {:.2e}", (rates.k - K_LITERAL).abs()));
    c.add("T_star", (ts - 5.8130).abs() <= 1e-3 && (ts - ts_oracle).abs() < 1e-12, format!("{ts:.6}"));
    c.add("prefactor", (pre - 3.1435).abs() <= 1e-3 && (pre - pre_oracle).abs() < 1e-12, format!("{pre:.6}"));
    c.add("B(1)", rel(b, 7f64.exp()) <= 1e-6, format!("{b:.6}"));
    let r = classify_regime(2.5 / 7f64.exp().powf(0.4), 0.0, &ConstantsRegistry::default()).unwrap();
    c.add("threshold_equality", r.t_star.unwrap_or(0.0).abs() < 1e-9, format!("{:?}", r.t_star));
    c.outcome()
}

fn c9() -> Outcome {
    let g = build_grid(6.0, 16).unwrap();
    let mut fields = mixture_corpus(&g, 10, 91).unwrap();
    fields.extend(noise_corpus(&g, 10, true, 92).unwrap());
    let (mut l1_gap, mut lpp_gap) = (0.0f64, 0.0f64);
    let mut comparison_violations = 0;
    for f in &fields {
        let l1 = lp_norm(f, 1.0, 0.0).unwrap();
        let weak = lorentz_norm(f, 1.0, f64::INFINITY, 0.0, LorentzFlavor::Maximal).unwrap();
        l1_gap = l1_gap.max(rel(weak, l1));
        for p in [2.0, 3.0] {
            let lp = lp_norm(f, p, 0.0).unwrap();
            lpp_gap = lpp_gap.max(rel(lorentz_norm(f, p, p, 0.0, LorentzFlavor::Starred).unwrap(), lp));
        }
        for (p, q) in [(1.5, 1.0), (2.0, 2.0), (3.0, 1.0), (4.0, f64::INFINITY), (6.0, 2.0)] {
            let s = lorentz_norm(f, p, q, 0.0, LorentzFlavor::Starred).unwrap();
            let m = lorentz_norm(f, p, q, 0.0, LorentzFlavor::Maximal).unwrap();
            let tol = 1e-12 * m;
            if !(s <= m + tol && m <= p / (p - 1.0) * s + tol) {
                comparison_violations += 1;
            }
        }
    }
    let ball = Field::from_fn(g, |v| if v[0] * v[0] + v[1] * v[1] + v[2] * v[2] <= 4.0 { 1.0 } else { 0.0 }).unwrap();
    let vol = ball.integral();
    let s = lorentz_norm(&ball, 3.0, 1.0, 0.0, LorentzFlavor::Starred).unwrap();
    let m = lorentz_norm(&ball, 3.0, 1.0, 0.0, LorentzFlavor::Maximal).unwrap();
    let cube = vol.cbrt();
    let mut c = Checks::new();
    c.add("L1inf_vs_L1", l1_gap <= L1_INF_TOL, format!("{l1_gap:.1e}"));
    c.add("Lpp_vs_Lp", lpp_gap <= LPP_TOL, format!("{lpp_gap:.1e}"));
    c.add("ball_starred", rel(s, 3.0 * cube) <= BALL_TOL, format!("{:.1e}", rel(s, 3.0 * cube)));
    c.add("ball_maximal", rel(m, 4.5 * cube) <= BALL_TOL, format!("{:.1e}", rel(m, 4.5 * cube)));
    c.add("ball_ratio", (m / s - 1.5).abs() <= BALL_TOL, format!("{:.12}", m / s));
    c.add("comparison_violations", comparison_violations == 0, comparison_violations.to_string());
    c.outcome()
}

fn c10() -> Outcome {
    let start = Instant::now();
    let out = run_appendix_suite(&SuiteConfig::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let mut c = Checks::new();
    for r in &out.reports {
        c.add(&r.id, r.holds(), format!("{}/{}", r.violations, r.trials));
    }
    let log = out.reports.iter().find(|r| r.id == "log_inequality").unwrap();
    c.add("log_trials", log.trials == 1_000_000, log.trials.to_string());
    c.add("runtime_s", secs <= 600.0, format!("{secs:.0}"));
    c.outcome()
}

fn c11() -> Outcome {
    let rep = oscillatory_study(8.0).unwrap();
    let target = -7.0 / 9.0;
    let mut c = Checks::new();
    c.add("normalization", rep.worst_normalization <= NORMALIZATION_MAX, format!("{:.1e}", rep.worst_normalization));
    c.add("scales", rep.scales.len() == 4, rep.scales.len().to_string());
    c.add("grid_slope", rel(rep.grid_slope, target) <= SLOPE_REL_MAX, format!("{:.4}", rep.grid_slope));
    c.add("closed_form_slope", rel(rep.exact_slope, target) <= SLOPE_REL_MAX, format!("{:.4}", rep.exact_slope));
    c.outcome()
}

fn c12() -> Outcome {
    let reg = survival_registry();
    let mut correct = 0;
    let mut worst = 0.0f64;
    for y0 in SMALL_Y0 {
        let rep = wode_run(y0, &reg, 1000.0).unwrap();
        let err = rep.exponent_error().unwrap_or(f64::INFINITY);
        worst = worst.max(err);
        if rep.classification == WodeClass::GlobalDecay && err <= EXPONENT_REL_MAX {
            correct += 1;
        }
    }
    for y0 in LARGE_Y0 {
        if matches!(wode_run(y0, &reg, 1000.0).unwrap().classification, WodeClass::Blowup { .. }) {
            correct += 1;
        }
    }
    let mut c = Checks::new();
    c.add("correct", correct == 10, format!("{correct}/10"));
    c.add("worst_exponent_error", worst <= EXPONENT_REL_MAX, format!("{worst:.3}"));
    c.outcome()
}

fn c13() -> Outcome {
    let g = build_grid(6.0, 16).unwrap();
    let plan = plan_for(g);
    let f0 = normalized_mixture(&g, 0.5, [1.0, 0.0, 0.0], 0.5).unwrap();
    let cfg = SolverConfig { t_end: 5.0, sample_interval: 0.25, balance: false, ..SolverConfig::default() };
    let opts = RunOptions { keep_snapshots: true, ..RunOptions::default() };
    let tr = run(&f0, &plan, &cfg, &opts).unwrap();
    let mu = reference_maxwellian(&g);
    let norms: Vec<f64> = tr
        .snapshots
        .iter()
        .map(|f| sobolev_norm(&f.sub(&mu).unwrap(), 1.0, 2.0, SobolevFlavor::Weighted).unwrap())
        .collect();
    let rises = norms.windows(2).filter(|w| !(w[1] < w[0])).count();
    let ratio = norms.last().unwrap() / norms[0];
    let mut c = Checks::new();
    c.add("samples", norms.len() == 21, norms.len().to_string());
    c.add("rises", rises == 0, rises.to_string());
    c.add("decay_ratio_t5", ratio < 1.0, format!("{ratio:.3e}"));
    c.add("full_rate", true, "not desk-reproducible; ODE surrogate is criterion 12".into());
    c.outcome()
}

fn main() {
    let mut unexpected = Vec::new();
    let mut report = |id: u32, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN.iter().find(|k| k.0 == id);
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = match known {
            Some((_, subs)) if !o.pass && o.failed.iter().map(String::as_str).eq(subs.iter().copied()) => {
                " [known: literal disagrees with exact arithmetic]"
            }
            _ if !o.pass => {
                unexpected.push(id);
                ""
            }
            _ => "",
        };
        println!("criterion {id:>2}: {status}{note} ({secs:.1} s) {}", o.detail);
    };
    report(1, &mut c1);
    let runs = bimodal_runs();
    report(2, &mut || c2(&runs));
    report(3, &mut || c3(&runs));
    report(4, &mut c4);
    report(5, &mut || c5(&runs));
    report(6, &mut c6);
    report(7, &mut c7);
    report(8, &mut c8);
    report(9, &mut c9);
    report(10, &mut c10);
    report(11, &mut c11);
    report(12, &mut c12);
    report(13, &mut c13);
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
