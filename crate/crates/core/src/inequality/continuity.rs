//! |H(f1) − H(f2)| against powers 3/10, 6/5, 1/5 of ‖f1 − f2‖_{Ḣ¹}.

use super::report::IneqReport;
use crate::collision::relative_entropy_to;
use crate::error::Result;
use crate::grid::Field;
use crate::norms::{sobolev_norm, SobolevFlavor};

/// (|ΔH|, x^{3/10} + x^{6/5} + x^{1/5}) with H relative to the reference Maxwellian.
pub fn continuity_sides(f1: &Field, f2: &Field) -> Result<(f64, f64)> {
    let h1 = relative_entropy_to(f1, 1.0, [0.0; 3], 1.0)?;
    let h2 = relative_entropy_to(f2, 1.0, [0.0; 3], 1.0)?;
    let x = sobolev_norm(&f1.sub(f2)?, 1.0, 0.0, SobolevFlavor::Homogeneous)?;
    Ok(((h1 - h2).abs(), x.powf(0.3) + x.powf(1.2) + x.powf(0.2)))
}

pub fn check_entropy_continuity(pairs: &[(Field, Field)], seed: u64) -> Result<IneqReport> {
    let sides = pairs.iter().map(|(a, b)| continuity_sides(a, b)).collect::<Result<Vec<_>>>()?;
    Ok(IneqReport::fitted_upper("entropy_continuity", &sides, seed))
}
