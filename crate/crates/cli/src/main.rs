use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use landau_core::analytics::{classify_regime, ConstantsRegistry, RegimeReport};
use landau_core::inequality::{run_appendix_suite, SuiteConfig};
use landau_core::io::{
    cache_dir_from_env, cmd_calibrate, cmd_ode, cmd_run, load_registry, read_snapshot, write_plotdata, CalibrateConfig,
    Curve, FlavorDefaults, NormSpec, OdeKind, RunConfig, Table, ALL_CURVES,
};
use landau_core::solver::fmt_num;

/// Exit status when a hard assertion fails (errors exit with 1, usage errors with 2).
const VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "landau", version, about = "Homogeneous Landau equation solver and diagnostics")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Constants registry JSON.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    /// Seed for randomized corpora and trials.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the free constants and write a registry.
    Calibrate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Registry output path.
        #[arg(long)]
        out: PathBuf,
        /// Also write the calibration reports here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Classify (H0, X0²) and print the regime report.
    Regime {
        #[arg(long = "H0")]
        h0: f64,
        #[arg(long = "X0sq")]
        x0sq: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a scalar differential inequality as an equality.
    Ode {
        kind: OdeArg,
        #[arg(long)]
        params: PathBuf,
        /// Trajectory CSV (columns t,X2,H,D,M,lhs,rhs).
        #[arg(long)]
        out: PathBuf,
        /// Also write the JSON report here (printed otherwise).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate norms of snapshot fields, one value per line.
    Norms {
        #[arg(long, required_unless_present = "manifest")]
        input: Option<PathBuf>,
        /// Norm spec such as lorentz:p=3,q=1,l=-3; repeatable.
        #[arg(long = "norm", required_unless_present = "manifest")]
        norms: Vec<String>,
        /// Default flavor: starred|maximal (Lorentz) or homogeneous|weighted (Sobolev).
        #[arg(long)]
        flavor: Option<String>,
        /// Lines of `<field path> <norm spec>`; paths relative to the manifest.
        #[arg(long, conflicts_with_all = ["input", "norms"])]
        manifest: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an inequality suite and write the reports.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::Appendix)]
        suite: Suite,
        /// Log-inequality trials (accepts 1e6).
        #[arg(long)]
        trials: Option<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Long-format `curve,t,value` data from a trajectory CSV.
    Plotdata {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated subset of M,H,h1,envelope.
        #[arg(long, value_delimiter = ',')]
        curves: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OdeArg {
    Master,
    Wode,
    Lifespan,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Appendix,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn registry(global: &Global) -> Result<ConstantsRegistry> {
    match &global.registry {
        Some(p) => Ok(load_registry(p)?),
        None => Ok(ConstantsRegistry::default()),
    }
}

fn parent(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

#[derive(Serialize)]
struct RegimeOutput<'a> {
    #[serde(flatten)]
    report: &'a RegimeReport,
    /// Time after which the solution is in the stable regime; 0 when it starts there.
    #[serde(rename = "T_star")]
    t_star_or_zero: f64,
}

/// Returns the hard-assertion failures.
fn execute(cli: Cli) -> Result<Vec<String>> {
    let g = &cli.global;
    match cli.command {
        Command::Run { config, out } => {
            let cfg = RunConfig::from_json(&read(&config)?)?;
            let base = parent(&config);
            let reg = match &g.registry {
                Some(p) => load_registry(p)?,
                None => cfg.load_registry(&base)?,
            };
            let out = out.unwrap_or_else(|| base.join(&cfg.output));
            let cache = cache_dir_from_env();
            let res = cmd_run(&cfg, &base, &out, &reg, cache.as_deref())?;
            for f in &res.files {
                eprintln!("wrote {}", f.display());
            }
            // kept out of summary.json so reruns are byte-identical
            eprintln!("wall time {:.3} s", res.trajectory.summary.wall_time_s);
            Ok(res.failures)
        }
        Command::Calibrate { config, out, report } => {
            let mut cfg = match &config {
                Some(p) => CalibrateConfig::from_json(&read(p)?)?,
                None => CalibrateConfig::default(),
            };
            if let Some(s) = g.seed {
                cfg.seed = s;
            }
            let res = cmd_calibrate(&cfg, &registry(g)?)?;
            fs::write(&out, res.registry.to_json() + "\n")?;
            emit(report.as_deref(), &json(&res.reports)?)?;
            Ok(res
                .reports
                .iter()
                .filter(|r| !r.holds())
                .map(|r| format!("{}: {} violations", r.id, r.violations))
                .collect())
        }
        Command::Regime { h0, x0sq, out } => {
            let rep = classify_regime(h0, x0sq, &registry(g)?)?;
            let view = RegimeOutput { report: &rep, t_star_or_zero: rep.t_star.unwrap_or(0.0) };
            emit(out.as_deref(), &json(&view)?)?;
            Ok(Vec::new())
        }
        Command::Ode { kind, params, out, report } => {
            let kind = match kind {
                OdeArg::Master => OdeKind::Master,
                OdeArg::Wode => OdeKind::Wode,
                OdeArg::Lifespan => OdeKind::Lifespan,
            };
            let res = cmd_ode(kind, &read(&params)?, &registry(g)?)?;
            fs::write(&out, &res.csv)?;
            emit(report.as_deref(), &json(&res.report)?)?;
            Ok(res.failures)
        }
        Command::Norms { input, norms, flavor, manifest, out } => {
            let defaults = match &flavor {
                Some(f) => FlavorDefaults::from_name(f)?,
                None => FlavorDefaults::default(),
            };
            let jobs: Vec<(PathBuf, String)> = match &manifest {
                Some(m) => {
                    let base = parent(m);
                    read(m)?
                        .lines()
                        .map(str::trim)
                        .filter(|l| !l.is_empty() && !l.starts_with('#'))
                        .map(|l| {
                            let (p, s) = l
                                .split_once(char::is_whitespace)
                                .with_context(|| format!("manifest line {l:?} needs `<path> <norm>`"))?;
                            Ok((base.join(p), s.trim().to_string()))
                        })
                        .collect::<Result<_>>()?
                }
                None => {
                    let input = input.expect("clap enforces --input");
                    norms.into_iter().map(|n| (input.clone(), n)).collect()
                }
            };
            let mut text = String::new();
            for (path, spec) in jobs {
                let spec: NormSpec = spec.parse()?;
                let (f, _) = read_snapshot(&path).with_context(|| format!("reading {}", path.display()))?;
                text.push_str(&fmt_num(spec.eval(&f, defaults)?));
                text.push('\n');
            }
            emit(out.as_deref(), &text)?;
            Ok(Vec::new())
        }
        Command::Check { suite: Suite::Appendix, trials, config, out } => {
            let mut cfg = match &config {
                Some(p) => landau_core::io::parse_json::<SuiteConfig>(&read(p)?, "suite config")?,
                None => SuiteConfig::default(),
            };
            if let Some(s) = g.seed {
                cfg.seed = s;
            }
            if let Some(t) = trials {
                if !(t >= 1.0 && t.fract() == 0.0 && t <= 1e12) {
                    bail!("--trials must be a positive integer, got {t}");
                }
                cfg.log_trials = t as usize;
            }
            let res = run_appendix_suite(&cfg)?;
            emit(out.as_deref(), &json(&res.reports)?)?;
            let o = &res.oscillatory;
            eprintln!(
                "oscillatory data: grid slope {:.4}, closed-form slope {:.4}, worst normalization {:.2e}",
                o.grid_slope, o.exact_slope, o.worst_normalization
            );
            Ok(res
                .reports
                .iter()
                .filter(|r| !r.holds())
                .map(|r| format!("{}: {} violations", r.id, r.violations))
                .collect())
        }
        Command::Plotdata { input, curves, out } => {
            let table = Table::parse(&read(&input)?)?;
            let curves: Vec<Curve> = if curves.is_empty() {
                ALL_CURVES.to_vec()
            } else {
                curves.iter().map(|c| c.parse()).collect::<landau_core::Result<_>>()?
            };
            let mut buf = Vec::new();
            write_plotdata(&table, &curves, &mut buf)?;
            emit(out.as_deref(), std::str::from_utf8(&buf)?)?;
            Ok(Vec::new())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set thread count: {e}");
            return ExitCode::FAILURE;
        }
    }
    match execute(cli) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in failures {
                eprintln!("violation: {f}");
            }
            ExitCode::from(VIOLATION)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
