//! Kernels, convolution, and the collision operator.

pub mod coercivity;
pub mod dissipation;
pub mod kernel;
pub mod operator;
pub mod plan;

pub use coercivity::{a_moment, coercivity_pair, CoercivityPair, CoercivityRoute};
pub use dissipation::{
    dissipation_from_q, entropy_dissipation, log_floor, relative_entropy, relative_entropy_to, DissipationMethod,
};
pub use kernel::{kernel_a, kernel_b, kernel_c, KernelSampler, KernelSpec};
pub use operator::{landau_q, operator_derivative, Coefficients, Form};
pub use plan::{ConvolutionPlan, Which, KERNEL_CACHE_VERSION};
