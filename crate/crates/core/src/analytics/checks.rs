//! Grid-side checks that feed the registry: dissipation lower bounds and CKP.

use serde::Serialize;

use super::formulas::ckp_bound;
use super::registry::{ConstantsRegistry, Provenance};
use crate::calibration::{fit_lower, fit_upper, Fit};
use crate::collision::{entropy_dissipation, relative_entropy_to, ConvolutionPlan, DissipationMethod};
use crate::error::{LandauError, Result};
use crate::grid::{gradient, reference_maxwellian, Field};
use crate::norms::{lorentz_norm, lp_norm, sobolev_norm, LorentzFlavor, SobolevFlavor};

/// The four quantities entering the three dissipation bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DissipationSides {
    pub d: f64,
    /// ‖f‖_{L³_{−3}}
    pub l3: f64,
    /// ‖√f‖²_{H¹_{−3/2}}
    pub sqrt_h1: f64,
    /// ‖f‖_{L^{3,1}_{−3}}, maximal flavor
    pub l31: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DissipationReport {
    pub sides: DissipationSides,
    /// ‖f‖_{L³_{−3}} ≤ C0(1 + D)
    pub l3_ok: bool,
    /// D + 1 ≥ CD1‖√f‖²_{H¹_{−3/2}}
    pub h1_ok: bool,
    /// D + 1 ≥ CD2‖f‖_{L^{3,1}_{−3}}
    pub l31_ok: bool,
}

impl DissipationReport {
    pub fn all_hold(&self) -> bool {
        self.l3_ok && self.h1_ok && self.l31_ok
    }
}

pub fn dissipation_sides(f: &Field, plan: &ConvolutionPlan) -> Result<DissipationSides> {
    if !f.is_nonnegative() {
        return Err(LandauError::Domain("dissipation bounds need a nonnegative field".into()));
    }
    Ok(DissipationSides {
        d: entropy_dissipation(f, plan, DissipationMethod::Single)?,
        l3: lp_norm(f, 3.0, -3.0)?,
        sqrt_h1: sobolev_norm(&f.map(f64::sqrt), 1.0, -1.5, SobolevFlavor::Weighted)?.powi(2),
        l31: lorentz_norm(f, 3.0, 1.0, -3.0, LorentzFlavor::Maximal)?,
    })
}

/// ‖√f‖²_{H¹_{−3/2}} assembled from the grid gradient of √f⟨v⟩^{−3/2}, without the norms module.
pub fn sqrt_h1_direct(f: &Field) -> f64 {
    let g = *f.grid();
    let w = f.zip_map(&Field::new(g, g.weight(-1.5)).expect("finite weight"), |a, b| a.max(0.0).sqrt() * b)
        .expect("same grid");
    let grad = gradient(&w);
    let sq = |x: &Field| x.values().iter().map(|v| v * v).sum::<f64>();
    (sq(&w) + grad.iter().map(sq).sum::<f64>()) * g.cell_volume()
}

pub fn dissipation_bound_check(f: &Field, plan: &ConvolutionPlan, registry: &ConstantsRegistry) -> Result<DissipationReport> {
    let s = dissipation_sides(f, plan)?;
    Ok(report(s, registry))
}

fn report(s: DissipationSides, registry: &ConstantsRegistry) -> DissipationReport {
    let tol = 1.0 + crate::calibration::ROUNDOFF;
    DissipationReport {
        sides: s,
        l3_ok: s.l3 <= registry.get("C0") * (1.0 + s.d) * tol,
        h1_ok: (s.d + 1.0) * tol >= registry.get("CD1") * s.sqrt_h1,
        l31_ok: (s.d + 1.0) * tol >= registry.get("CD2") * s.l31,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DissipationCalibration {
    pub c0: Fit,
    pub cd1: Fit,
    pub cd2: Fit,
    pub sides: Vec<DissipationSides>,
}

impl DissipationCalibration {
    pub fn test_violations(&self) -> usize {
        self.c0.violations + self.cd1.violations + self.cd2.violations
    }

    /// Stores the fitted constants as calibrated.
    pub fn apply(&self, registry: &mut ConstantsRegistry) -> Result<()> {
        registry.set("C0", self.c0.constant, Provenance::Calibrated)?;
        registry.set("CD1", self.cd1.constant, Provenance::Calibrated)?;
        registry.set("CD2", self.cd2.constant, Provenance::Calibrated)
    }
}

/// Fit C0, CD1, CD2 on a seeded half of `corpus`, count violations on the other half.
pub fn calibrate_dissipation(corpus: &[Field], plan: &ConvolutionPlan, seed: u64) -> Result<DissipationCalibration> {
    let sides = corpus
        .iter()
        .map(|f| dissipation_sides(f, plan))
        .collect::<Result<Vec<_>>>()?;
    let pairs = |lhs: fn(&DissipationSides) -> f64, rhs: fn(&DissipationSides) -> f64| -> Vec<(f64, f64)> {
        sides.iter().map(|s| (lhs(s), rhs(s))).collect()
    };
    Ok(DissipationCalibration {
        c0: fit_upper(&pairs(|s| s.l3, |s| 1.0 + s.d), seed),
        cd1: fit_lower(&pairs(|s| s.d + 1.0, |s| s.sqrt_h1), seed),
        cd2: fit_lower(&pairs(|s| s.d + 1.0, |s| s.l31), seed),
        sides,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CkpCheck {
    pub l1_sq: f64,
    pub two_h: f64,
    pub holds: bool,
}

/// ‖f − μ‖²_{L¹} against 2H(f|μ), μ the fixed reference Maxwellian.
pub fn ckp_check(f: &Field) -> Result<CkpCheck> {
    let mu = reference_maxwellian(f.grid());
    let l1 = lp_norm(&f.sub(&mu)?, 1.0, 0.0)?;
    let h = relative_entropy_to(f, 1.0, [0.0; 3], 1.0)?;
    let bound = ckp_bound(h.max(0.0))?;
    Ok(CkpCheck {
        l1_sq: l1 * l1,
        two_h: bound * bound,
        holds: l1 <= bound * (1.0 + 1e-10) + 1e-14,
    })
}
