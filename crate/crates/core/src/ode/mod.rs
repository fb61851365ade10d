//! Scalar differential inequalities, integrated as equalities, and verifiers for them.

pub mod blowup;
pub mod integrator;
pub mod lifespan;
pub mod master;
pub mod wode;

pub use blowup::{blowup_lemma_check, BlowupLemmaReport, LadderPoint};
pub use integrator::{integrate, Outcome, Solution, Tolerance, OVERFLOW_GUARD};
pub use lifespan::{lifespan_envelope, lifespan_ode, LifespanReport};
pub use master::{
    branch_predict, calibrate_c6, check_monotone_samples, extrapolate_blowup, integrate_master, integrate_master_at, verify_monotonicity,
    BranchPrediction, HProfile, MasterParams, MonotonicityReport, ScalarTrajectory, Violation, MIN_SAMPLES,
};
pub use wode::{survival_registry, wode_run, WodeClass, WodeReport, LARGE_Y0, SMALL_Y0, WODE_SAMPLES};
