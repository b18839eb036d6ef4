//! Error type shared across the crate.

use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A density sample is NaN or infinite.
    NonFiniteDensity,
    /// A density sample is negative beyond round-off.
    NegativeDensity { index: usize, value: f64 },
    /// Normalization of a zero-mass density was requested.
    ZeroMass,
    /// An operation required a probability density but got mass far from 1.
    RequiresProbabilityDensity { mass: f64 },
    /// Dilation pushed mass outside the grid.
    DilationExceedsDomain { lost_mass: f64 },
    /// Convolution is defined for 1D Cartesian grids only.
    ConvolutionRequiresCartesian,
    /// Two grids that must match (geometry, spacing, size) do not.
    GridMismatch,
    /// Entropy power of order p is undefined for p <= (n-2)/n.
    EntropyPowerUndefined { p: f64, n: u32 },
    /// Order p outside the admissible range for the requested quantity.
    InvalidOrder { p: f64 },
    /// A parameter failed validation.
    InvalidParameter(&'static str),
    /// Bracketing for a monotone root-find failed after expansion.
    BracketFailure,
    /// A refinement loop did not converge; carries the last relative change.
    NoConvergence { last_change: f64 },
    /// The adaptive time step collapsed (diffusivity blew up).
    CflCollapse,
    /// Accumulated mass drift along a trajectory exceeded the allowed bound.
    MassDrift { drift: f64 },
    /// Scheme and grid geometry are incompatible.
    IncompatibleScheme,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFiniteDensity => write!(f, "non-finite density"),
            Error::NegativeDensity { index, value } => {
                write!(f, "negative density sample {value:e} at index {index}")
            }
            Error::ZeroMass => write!(f, "cannot normalize a zero-mass density"),
            Error::RequiresProbabilityDensity { mass } => {
                write!(f, "requires probability density (mass = {mass})")
            }
            Error::DilationExceedsDomain { lost_mass } => {
                write!(f, "dilation exceeds domain (lost mass {lost_mass:e})")
            }
            Error::ConvolutionRequiresCartesian => {
                write!(f, "convolution requires Cartesian1D grids")
            }
            Error::GridMismatch => write!(f, "grid specs do not match"),
            Error::EntropyPowerUndefined { p, n } => {
                write!(f, "entropy power undefined for p = {p}, n = {n}")
            }
            Error::InvalidOrder { p } => write!(f, "inadmissible order p = {p}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::BracketFailure => write!(f, "root not bracketed after expansion"),
            Error::NoConvergence { last_change } => {
                write!(f, "refinement did not converge (last change {last_change:e})")
            }
            Error::CflCollapse => write!(f, "CFL collapse: diffusivity blew up"),
            Error::MassDrift { drift } => write!(f, "mass drift {drift:e} beyond tolerance"),
            Error::IncompatibleScheme => write!(f, "scheme incompatible with grid geometry"),
        }
    }
}

impl core::error::Error for Error {}
