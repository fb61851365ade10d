//! Velocity-space simulator for the spatially homogeneous Landau equation, with
//! diagnostics for its entropy, norms, and differential inequalities.

pub mod analytics;
pub mod calibration;
pub mod collision;
pub mod error;
pub mod fft;
pub mod grid;
pub mod inequality;
pub mod io;
pub mod norms;
pub mod ode;
pub mod par;
pub mod quad;
pub mod solver;
pub mod stencil;

pub use error::{LandauError, Result};
pub use grid::{build_grid, Field, FluidMoments, VelocityGrid};
