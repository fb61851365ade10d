//! Run configuration: strict JSON, unknown keys rejected, errors located by JSON pointer.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::normspec::NormSpec;
use super::snapshot::read_snapshot;
use crate::analytics::ConstantsRegistry;
use crate::collision::{Form, KernelSpec};
use crate::error::{LandauError, Result};
use crate::grid::{build_grid, reference_maxwellian, Field, VelocityGrid};
use crate::inequality::{make_oscillatory_data, normalized_mixture};
use crate::solver::{DtPolicy, Positivity, Scheme, SolverConfig, DEFAULT_CFL};

/// Deserialize `text`, reporting failures as `<what> <json pointer>: <message>`.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        LandauError::Config(format!("{what} {}: {}", json_pointer(e.path()), e.inner()))
    })
}

pub fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TiedEpsilon {
    #[serde(rename = "2dx")]
    TwoDx,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonSpec {
    Value(f64),
    Tied(TiedEpsilon),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    #[serde(default = "default_epsilon")]
    pub epsilon: EpsilonSpec,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

fn default_epsilon() -> EpsilonSpec {
    EpsilonSpec::Tied(TiedEpsilon::TwoDx)
}

fn default_gamma() -> f64 {
    -3.0
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig { epsilon: default_epsilon(), gamma: default_gamma() }
    }
}

impl KernelConfig {
    pub fn spec(&self, grid: &VelocityGrid) -> Result<KernelSpec> {
        let eps = match self.epsilon {
            EpsilonSpec::Value(e) => e,
            EpsilonSpec::Tied(TiedEpsilon::TwoDx) => 2.0 * grid.spacing(),
        };
        KernelSpec::new(eps, self.gamma)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitConfig {
    Maxwellian,
    /// Two Maxwellians of common temperature along the x axis, normalized to ρ = 1, u = 0, T = 1;
    /// `separation` is the distance between their centers.
    Bimodal {
        #[serde(default = "default_separation")]
        separation: f64,
        #[serde(default = "default_weights")]
        weights: [f64; 2],
    },
    Oscillatory { eps: f64 },
    File { path: PathBuf },
}

fn default_separation() -> f64 {
    2.0
}

fn default_weights() -> [f64; 2] {
    [0.5, 0.5]
}

impl InitConfig {
    pub fn bimodal_default() -> Self {
        InitConfig::Bimodal { separation: default_separation(), weights: default_weights() }
    }

    /// Relative paths resolve against `base`.
    pub fn build(&self, grid: &VelocityGrid, base: &Path) -> Result<Field> {
        match self {
            InitConfig::Maxwellian => Ok(reference_maxwellian(grid)),
            InitConfig::Bimodal { separation, weights } => {
                let total = weights[0] + weights[1];
                if !(weights[0] > 0.0 && weights[1] > 0.0 && (total - 1.0).abs() <= 1e-12) {
                    return Err(LandauError::Config(format!(
                        "/init/bimodal/weights: need two positive weights summing to 1, got {weights:?}"
                    )));
                }
                normalized_mixture(grid, weights[0], [1.0, 0.0, 0.0], *separation)
            }
            InitConfig::Oscillatory { eps } => make_oscillatory_data(*eps, grid),
            InitConfig::File { path } => {
                let p = if path.is_absolute() { path.clone() } else { base.join(path) };
                let (f, h) = read_snapshot(&p)?;
                let g = f.grid();
                if g.points_per_axis() != grid.points_per_axis() || g.extent() != grid.extent() {
                    return Err(LandauError::Config(format!(
                        "/init/file/path: snapshot has L = {}, N = {} but the grid is L = {}, N = {}",
                        h.l,
                        h.n,
                        grid.extent(),
                        grid.points_per_axis()
                    )));
                }
                Ok(f)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: DtPolicy,
    pub sample_interval: f64,
}

fn default_dt() -> DtPolicy {
    DtPolicy::AUTO
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub c_cfl: f64,
    pub projection: bool,
    pub positivity: Positivity,
    pub form: Form,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        let s = SolverConfig::default();
        SchemeConfig {
            scheme: s.scheme,
            c_cfl: DEFAULT_CFL,
            projection: s.projection,
            positivity: s.positivity,
            form: s.form,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsConfig {
    /// Extra norms evaluated on every sample, as norm-spec strings.
    pub norms: Vec<String>,
    pub balance_m: Vec<f64>,
    pub balance: bool,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        let s = SolverConfig::default();
        DiagnosticsConfig { norms: Vec::new(), balance_m: s.balance_m, balance: s.balance }
    }
}

impl DiagnosticsConfig {
    pub fn norm_specs(&self) -> Result<Vec<NormSpec>> {
        self.norms
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.parse::<NormSpec>()
                    .map_err(|e| LandauError::Config(format!("/diagnostics/norms/{i}: {e}")))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnapshotPolicy {
    None,
    Final,
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    #[serde(default)]
    pub kernel: KernelConfig,
    pub init: InitConfig,
    pub time: TimeConfig,
    #[serde(default)]
    pub solver: SchemeConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub registry: Option<PathBuf>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default = "default_snapshots")]
    pub snapshots: SnapshotPolicy,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn default_snapshots() -> SnapshotPolicy {
    SnapshotPolicy::All
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: RunConfig = parse_json(text, "config")?;
        c.validate()?;
        Ok(c)
    }

    /// Bimodal run on L = 8, N = 32 to t = 1.
    pub fn bimodal_default() -> Self {
        RunConfig {
            grid: GridConfig { l: 8.0, n: 32 },
            kernel: KernelConfig::default(),
            init: InitConfig::bimodal_default(),
            time: TimeConfig { t_end: 1.0, dt: DtPolicy::AUTO, sample_interval: 0.05 },
            solver: SchemeConfig::default(),
            diagnostics: DiagnosticsConfig::default(),
            registry: None,
            output: default_output(),
            snapshots: default_snapshots(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn grid(&self) -> Result<VelocityGrid> {
        build_grid(self.grid.l, self.grid.n).map_err(|e| LandauError::Config(format!("/grid: {e}")))
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            scheme: self.solver.scheme,
            dt: self.time.dt,
            c_cfl: self.solver.c_cfl,
            t_end: self.time.t_end,
            sample_interval: self.time.sample_interval,
            projection: self.solver.projection,
            positivity: self.solver.positivity,
            form: self.solver.form,
            balance_m: self.diagnostics.balance_m.clone(),
            balance: self.diagnostics.balance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.grid()?;
        self.kernel.spec(&g).map_err(|e| LandauError::Config(format!("/kernel: {e}")))?;
        self.solver_config()
            .validate()
            .map_err(|e| LandauError::Config(format!("/time: {e}")))?;
        self.diagnostics.norm_specs()?;
        Ok(())
    }

    /// Registry named in the config (relative to `base`), or the defaults.
    pub fn load_registry(&self, base: &Path) -> Result<ConstantsRegistry> {
        match &self.registry {
            Some(p) => load_registry(&if p.is_absolute() { p.clone() } else { base.join(p) }),
            None => Ok(ConstantsRegistry::default()),
        }
    }
}

pub fn load_registry(path: &Path) -> Result<ConstantsRegistry> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LandauError::Config(format!("cannot read registry {}: {e}", path.display())))?;
    ConstantsRegistry::from_json(&text)
}
