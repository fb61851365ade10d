//! Configuration, snapshots, norm selectors, plot data, and the command workflows behind the CLI.

pub mod commands;
pub mod config;
pub mod normspec;
pub mod plotdata;
pub mod snapshot;

pub use config::{
    json_pointer, load_registry, parse_json, DiagnosticsConfig, EpsilonSpec, GridConfig, InitConfig, KernelConfig,
    RunConfig, SchemeConfig, SnapshotPolicy, TimeConfig,
};
pub use normspec::{FlavorDefaults, NormSpec};
pub use plotdata::{write_plotdata, Curve, Table, ALL_CURVES};
pub use snapshot::{decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, SnapshotHeader};
pub use commands::{
    cache_dir_from_env, cmd_calibrate, cmd_ode, cmd_run, coercivity_reports, CalibrateConfig, CalibrationOutcome,
    LifespanParams, OdeKind, OdeOutcome, OdeReport, RunOutcome, WodeParams,
};
