//! Explicit time stepping of the homogeneous Landau equation and the energy-balance evaluators.

pub mod balance;
pub mod config;
pub mod run;
pub mod step;

pub use balance::{balance_terms, balance_terms_multi, l2_balance, l2_balance_multi, weighted_seminorm_sq, BalanceTerms, L2Balance};
pub use config::{DtPolicy, Positivity, Scheme, SolverConfig, DEFAULT_CFL};
pub use run::{fmt_num, run, DiagnosticsRecord, RunOptions, RunSummary, Trajectory, CSV_HEADER};
pub use step::{auto_dt, clip, collision_rhs, project_moments, raw_moments, step, step_from, RawMoments};
