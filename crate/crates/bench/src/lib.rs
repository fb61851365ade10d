//! Shared inputs for the benchmarks.

use landau_core::collision::{ConvolutionPlan, KernelSpec};
use landau_core::grid::{build_grid, reference_maxwellian, Field};
use landau_core::inequality::normalized_mixture;

/// Plan and bimodal field at L = 8 on an N³ grid.
pub fn bimodal_setup(n: usize) -> (ConvolutionPlan, Field) {
    let g = build_grid(8.0, n).expect("valid grid");
    let plan = ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()));
    let f = normalized_mixture(&g, 0.5, [1.0, 0.0, 0.0], 2.0).expect("valid mixture");
    (plan, f)
}

pub fn maxwellian(n: usize) -> Field {
    reference_maxwellian(&build_grid(8.0, n).expect("valid grid"))
}
