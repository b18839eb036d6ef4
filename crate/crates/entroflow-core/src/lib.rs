//! Probability densities on grids, the entropy/Fisher functionals attached to
//! them, diffusion flows (linear heat and nonlinear diffusion of order `p`),
//! and numerical checks of the sharp inequalities those objects satisfy.
//!
//! The crate is `no_std` + `alloc`: everything here is pure computation over
//! sampled densities. IO, file formats and the CLI live in the companion
//! `entroflow` crate.
//!
//! Quick tour:
//!
//! - [`grid`]: grid geometry (1D Cartesian or n-D radial) and quadrature.
//! - [`density`]: [`GridDensity`] with moments, dilation, convolution.
//! - [`functionals`]: Shannon/Rényi entropies, entropy powers, Fisher
//!   informations of order `p`, and the dilation-invariant Λ functional.
//! - [`profiles`]: Gaussian and Barenblatt extremals, the sharp constants
//!   γ_{n,p} and K_GN obtained from them by refined quadrature.
//! - [`diffusion`]: heat / nonlinear diffusion solvers and functional traces.
//! - [`harness`]: named inequality checks producing [`InequalityVerdict`]s.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod density;
pub mod diffusion;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod harness;
pub mod profiles;

pub use density::GridDensity;
pub use error::Error;
pub use functionals::FunctionalReport;
pub use grid::{Geometry, GridSpec};
pub use harness::InequalityVerdict;

/// Absolute tolerance on unit mass after `normalize`.
pub const MASS_TOL: f64 = 1e-8;
/// |p - 1| below this delegates Rényi quantities to their Shannon limits.
pub const SWITCH_EPS: f64 = 1e-8;
/// Cells with density below `SUPPORT_FLOOR * max` are excluded from Fisher
/// integrands; the integrand vanishes there analytically.
pub const SUPPORT_FLOOR: f64 = 1e-12;
/// Relative agreement required between grid refinements of γ_{n,p} and K_GN.
pub const GAMMA_TOL: f64 = 1e-6;
/// Allowed mass drift along solver trajectories.
pub const DRIFT_TOL: f64 = 1e-6;
