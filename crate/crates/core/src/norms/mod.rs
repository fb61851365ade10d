//! Weighted Lebesgue, L log L, Sobolev, Lorentz, and dyadic norms of grid fields.

pub mod dyadic;
pub mod lorentz;
pub mod sobolev;

pub use dyadic::{dyadic_norm, dyadic_partition, phi_bump, project, psi_bump, DyadicPartition, DYADIC_OVERLAP};
pub use lorentz::{lorentz_norm, rearrange, LorentzFlavor, StepProfile};
pub use sobolev::{sobolev_norm, spectral_norm, SobolevFlavor};

use crate::error::{LandauError, Result};
use crate::grid::Field;
use crate::par;

/// ‖f‖_{L^p_l}; `p = f64::INFINITY` gives max |f|⟨v⟩^l.
pub fn lp_norm(f: &Field, p: f64, l: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(LandauError::Domain(format!("p must be >= 1, got {p}")));
    }
    let g = f.grid();
    let v = f.values();
    if p.is_infinite() {
        return Ok(par::max_by(g.len(), |i| v[i].abs() * g.bracket(i).powf(l)).max(0.0));
    }
    let s = if p == 1.0 {
        par::sum_by(g.len(), |i| v[i].abs() * g.bracket(i).powf(l))
    } else if p == 2.0 {
        par::sum_by(g.len(), |i| (v[i] * g.bracket(i).powf(l)).powi(2))
    } else {
        par::sum_by(g.len(), |i| (v[i].abs() * g.bracket(i).powf(l)).powf(p))
    };
    Ok((s * g.cell_volume()).powf(1.0 / p))
}

/// ∫ |f| log(1 + |f|).
pub fn llogl(f: &Field) -> f64 {
    let v = f.values();
    par::sum_by(v.len(), |i| v[i].abs() * v[i].abs().ln_1p()) * f.grid().cell_volume()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, reference_maxwellian};

    #[test]
    fn lp_basics() {
        let g = build_grid(8.0, 32).unwrap();
        let mu = reference_maxwellian(&g);
        assert!((lp_norm(&mu, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
        let a = lp_norm(&mu, 3.0, 1.0).unwrap();
        let b = lp_norm(&mu.scale(-2.5), 3.0, 1.0).unwrap();
        assert!((b - 2.5 * a).abs() < 1e-12 * b);
        assert!(lp_norm(&mu, 0.5, 0.0).is_err());
        assert_eq!(lp_norm(&Field::zeros(g), 2.0, 3.0).unwrap(), 0.0);
        assert!((lp_norm(&mu, f64::INFINITY, 0.0).unwrap() - mu.max()).abs() < 1e-15);
    }

    #[test]
    fn ball_indicator_l2() {
        let g = build_grid(1.5, 96).unwrap();
        let ball = Field::from_fn(g, |v| if v[0] * v[0] + v[1] * v[1] + v[2] * v[2] < 1.0 { 1.0 } else { 0.0 }).unwrap();
        let exact = (4.0 * std::f64::consts::PI / 3.0).sqrt();
        assert!((lp_norm(&ball, 2.0, 0.0).unwrap() - exact).abs() < 0.01 * exact);
    }

    #[test]
    fn llogl_closed_form() {
        let g = build_grid(2.0, 8).unwrap();
        assert_eq!(llogl(&Field::zeros(g)), 0.0);
        let mut v = vec![0.0; g.len()];
        for x in v.iter_mut().take(10) {
            *x = 3.0;
        }
        let f = Field::new(g, v).unwrap();
        let expect = 3.0 * 4f64.ln() * 10.0 * g.cell_volume();
        assert!((llogl(&f) - expect).abs() < 1e-13);
    }
}
