//! Property checks for the appendix inequalities and the two-scale data generator.

pub mod continuity;
pub mod corpus;
pub mod interp;
pub mod logineq;
pub mod oneil;
pub mod oscillatory;
pub mod report;
pub mod suite;

pub use continuity::{check_entropy_continuity, continuity_sides};
pub use corpus::{
    appendix_corpus, coercivity_corpus, maxwellian_corpus, mixture_corpus, noise_corpus, normalized_mixture,
    normalized_mixture_corpus, CoercivityCase,
    CORPUS_TEMPERATURES,
};
pub use interp::{
    check_dyadic_equivalence, check_interpolations, dilate, dyadic_sides, h1_norm, hessian_l2, interpolation_sides,
    InterpSides, INTERP_WEIGHTS,
};
pub use logineq::{check_log_inequality, log_constant, log_samples, log_sides};
pub use oneil::{
    check_oneil, check_oneil_iii, convolution_max, oneil_i_sides, oneil_ii_sides, oneil_iii_sides, ConvolutionSides,
    ONEIL_EXPONENTS,
};
pub use oscillatory::{
    log_log_slope, make_oscillatory_data, GaussianTerm, GridMoments, OscillatoryDatum, MAX_SCALE, SLOPE_SCALES,
};
pub use report::{IneqReport, DIRECT_SLACK};
pub use suite::{continuity_pairs, oscillatory_study, run_appendix_suite, OscillatoryReport, SuiteConfig, SuiteOutcome};
