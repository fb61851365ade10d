//! Constants registry and closed-form evaluators for the stability and blowup estimates.

pub mod checks;
pub mod formulas;
pub mod registry;

pub use checks::{
    calibrate_dissipation, ckp_check, dissipation_bound_check, dissipation_sides, sqrt_h1_direct, CkpCheck,
    DissipationCalibration, DissipationReport, DissipationSides,
};
pub use formulas::{
    blowup_bounds, blowup_function, ckp_bound, classify_regime, decay_exponent, envelope_bound, envelope_prefactor,
    ln_blowup_function, ln_blowup_upper, local_lifespan, monotone_functional, rate_constants, t_star, BlowupBounds,
    Envelope, EnvelopeVariant, Regime, RegimeReport,
};
pub use registry::{c6_from_proof, Constant, ConstantsRegistry, Provenance, RateOverrides, Rates};
