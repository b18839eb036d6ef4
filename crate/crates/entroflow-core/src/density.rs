//! Sampled nonnegative densities on a grid, with moments, dilation,
//! normalization and convolution.

use alloc::vec::Vec;

use crate::error::Error;
use crate::grid::{sample_gradient, Geometry, GridSpec};
use crate::MASS_TOL;

/// Relative mass loss at which dilation is considered to overflow the domain.
const DILATION_LOSS_TOL: f64 = 1e-4;

/// A nonnegative density sampled at the grid nodes. Radial densities depend on
/// `|x|` only by construction. Immutable after construction; every operation
/// returns a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    spec: GridSpec,
    values: Vec<f64>,
}

impl GridDensity {
    /// Builds a density from explicit node samples, validating finiteness and
    /// nonnegativity.
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self, Error> {
        if values.len() != spec.node_count() {
            return Err(Error::GridMismatch);
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteDensity);
            }
            if v < 0.0 {
                return Err(Error::NegativeDensity { index: i, value: v });
            }
        }
        Ok(GridDensity { spec, values })
    }

    /// Samples `f` at the grid nodes. Negative round-off is clamped to zero.
    pub fn from_fn(spec: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self, Error> {
        let values: Vec<f64> = spec.nodes().map(|x| f(x).max(0.0)).collect();
        Self::from_values(spec, values)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dimension(&self) -> u32 {
        self.spec.dimension()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Quadrature of `weight(x) * d(x)` over the domain.
    pub fn integrate(&self, weight: impl Fn(f64) -> f64) -> Result<f64, Error> {
        let mut acc = 0.0;
        for (i, x) in self.spec.nodes().enumerate() {
            let w = weight(x);
            if !w.is_finite() {
                return Err(Error::NonFiniteDensity);
            }
            acc += self.spec.quad_weight(i) * w * self.values[i];
        }
        Ok(acc)
    }

    pub fn mass(&self) -> f64 {
        self.integrate(|_| 1.0).expect("constant weight is finite")
    }

    /// First moment. Radial densities are centered by construction.
    pub fn mean(&self) -> f64 {
        match self.spec.geometry() {
            Geometry::Cartesian1D => self.integrate(|x| x).expect("finite weight"),
            Geometry::RadialND => 0.0,
        }
    }

    /// Second moment E(d) = integral of |x|^2 d.
    pub fn second_moment(&self) -> f64 {
        self.integrate(|x| x * x).expect("finite weight")
    }

    /// Rescales to unit mass.
    pub fn normalize(&self) -> Result<Self, Error> {
        let m = self.mass();
        if !(m > 0.0) {
            return Err(Error::ZeroMass);
        }
        let values = self.values.iter().map(|v| v / m).collect();
        Ok(GridDensity { spec: self.spec, values })
    }

    pub fn is_normalized(&self) -> bool {
        (self.mass() - 1.0).abs() <= 1e-6
    }

    /// Linear interpolation of the samples at coordinate `x`; zero outside the
    /// grid (and, for radial grids, `|x|` is used).
    pub fn value_at(&self, x: f64) -> f64 {
        let x = match self.spec.geometry() {
            Geometry::Cartesian1D => x,
            Geometry::RadialND => x.abs(),
        };
        let lo = self.spec.node(0);
        let hi = self.spec.node(self.spec.cells());
        if x < lo || x > hi {
            return 0.0;
        }
        let h = self.spec.spacing();
        let s = (x - lo) / h;
        let i = (libm::floor(s) as usize).min(self.spec.cells() - 1);
        let frac = s - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// Mass-preserving dilation `f_a(x) = a^n f(a x)`, resampled on the same
    /// grid. Errors if the rescaled support no longer fits the domain.
    pub fn dilate(&self, a: f64) -> Result<Self, Error> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter("dilation factor must be positive"));
        }
        let scale = libm::pow(a, self.spec.dimension() as f64);
        let values: Vec<f64> = self.spec.nodes().map(|x| scale * self.value_at(a * x)).collect();
        let out = GridDensity { spec: self.spec, values };
        let m_in = self.mass();
        let lost = m_in - out.mass();
        if m_in > 0.0 && lost.abs() / m_in > DILATION_LOSS_TOL {
            return Err(Error::DilationExceedsDomain { lost_mass: lost });
        }
        Ok(out)
    }

    /// Discrete convolution `(d1 * d2)(x_i) = h sum_j d1(x_j) d2(x_i - x_j)`,
    /// restricted to 1D Cartesian grids with an even cell count so that node
    /// differences land on nodes again.
    pub fn convolve(&self, other: &GridDensity) -> Result<Self, Error> {
        if self.spec.geometry() != Geometry::Cartesian1D
            || other.spec.geometry() != Geometry::Cartesian1D
        {
            return Err(Error::ConvolutionRequiresCartesian);
        }
        if !self.spec.matches(&other.spec) {
            return Err(Error::GridMismatch);
        }
        let m = self.spec.cells();
        if m % 2 != 0 {
            return Err(Error::InvalidParameter("convolution requires an even cell count"));
        }
        let h = self.spec.spacing();
        let half = m / 2;
        let nodes = self.spec.node_count();
        let mut values = Vec::with_capacity(nodes);
        for i in 0..nodes {
            // x_i - x_j = (i - j) h maps to node index i - j + m/2
            let mut acc = 0.0;
            let j_lo = i.saturating_sub(half);
            let j_hi = (i + half).min(nodes - 1);
            for j in j_lo..=j_hi {
                acc += self.values[j] * other.values[i + half - j];
            }
            values.push(acc * h);
        }
        Ok(GridDensity { spec: self.spec, values })
    }

    /// L^r norm of the samples, `(integral |d|^r)^{1/r}`.
    pub fn lp_norm(&self, r: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > 0.0 {
                acc += self.spec.quad_weight(i) * libm::pow(v, r);
            }
        }
        libm::pow(acc, 1.0 / r)
    }

    /// L^2 norm of the finite-difference gradient.
    pub fn grad_l2_norm(&self) -> f64 {
        let g = sample_gradient(&self.spec, &self.values);
        let mut acc = 0.0;
        for (i, gi) in g.iter().enumerate() {
            acc += self.spec.quad_weight(i) * gi * gi;
        }
        libm::sqrt(acc)
    }

    /// Checks unit mass within `MASS_TOL`-ish slack and returns the density,
    /// for preconditions of entropy/Fisher evaluations.
    pub(crate) fn require_probability(&self) -> Result<(), Error> {
        let m = self.mass();
        if (m - 1.0).abs() > 1e-6 {
            return Err(Error::RequiresProbabilityDensity { mass: m });
        }
        Ok(())
    }
}

/// Convenience: the mass tolerance used after normalization.
pub fn mass_tol() -> f64 {
    MASS_TOL
}
