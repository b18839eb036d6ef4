//! Grid geometry and quadrature.
//!
//! Two geometries are supported: a symmetric 1D Cartesian interval
//! `[-r_max, r_max]` and the radial reduction of an n-dimensional radially
//! symmetric density on `[0, r_max]`. Quadrature is composite trapezoidal on
//! the grid nodes; for the radial case the cell measure carries the surface
//! factor `omega_{n-1} r^{n-1}`.

use alloc::vec::Vec;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Cartesian1D,
    RadialND,
}

/// Discretization of the domain: geometry, dimension, half-width and cell count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    geometry: Geometry,
    n: u32,
    extent: f64,
    cells: usize,
}

impl GridSpec {
    /// Symmetric 1D grid on `[-extent, extent]` with `cells` cells.
    pub fn cartesian_1d(extent: f64, cells: usize) -> Result<Self, Error> {
        Self::validate(extent, cells)?;
        Ok(GridSpec { geometry: Geometry::Cartesian1D, n: 1, extent, cells })
    }

    /// Radial grid on `[0, extent]` for dimension `n >= 2`.
    pub fn radial_nd(n: u32, extent: f64, cells: usize) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::InvalidParameter("RadialND requires n >= 2"));
        }
        Self::validate(extent, cells)?;
        Ok(GridSpec { geometry: Geometry::RadialND, n, extent, cells })
    }

    /// Grid for dimension `n`: Cartesian for n = 1, radial otherwise.
    pub fn for_dimension(n: u32, extent: f64, cells: usize) -> Result<Self, Error> {
        if n == 1 {
            Self::cartesian_1d(extent, cells)
        } else {
            Self::radial_nd(n, extent, cells)
        }
    }

    fn validate(extent: f64, cells: usize) -> Result<(), Error> {
        if !(extent > 0.0) || !extent.is_finite() {
            return Err(Error::InvalidParameter("extent must be positive and finite"));
        }
        if cells < 8 {
            return Err(Error::InvalidParameter("at least 8 cells required"));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    /// Domain half-width (Cartesian) or outer radius (radial).
    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn node_count(&self) -> usize {
        self.cells + 1
    }

    pub fn spacing(&self) -> f64 {
        match self.geometry {
            Geometry::Cartesian1D => 2.0 * self.extent / self.cells as f64,
            Geometry::RadialND => self.extent / self.cells as f64,
        }
    }

    /// Coordinate of node `i` (x for Cartesian, r for radial).
    pub fn node(&self, i: usize) -> f64 {
        match self.geometry {
            Geometry::Cartesian1D => -self.extent + i as f64 * self.spacing(),
            Geometry::RadialND => i as f64 * self.spacing(),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.node_count()).map(move |i| self.node(i))
    }

    /// Trapezoidal quadrature weight of node `i`, including the radial
    /// measure `omega_{n-1} r^{n-1}` where applicable.
    pub fn quad_weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        let trap = if i == 0 || i == self.cells { 0.5 } else { 1.0 };
        match self.geometry {
            Geometry::Cartesian1D => trap * h,
            Geometry::RadialND => {
                let r = self.node(i);
                trap * h * unit_sphere_area(self.n) * libm::pow(r, (self.n - 1) as f64)
            }
        }
    }

    /// Same-spacing, same-size check used by binary operations.
    pub fn matches(&self, other: &GridSpec) -> bool {
        self == other
    }
}

/// Surface area of the unit sphere S^{n-1}: `2 pi^{n/2} / Gamma(n/2)`.
pub fn unit_sphere_area(n: u32) -> f64 {
    let nf = n as f64;
    2.0 * libm::pow(core::f64::consts::PI, nf / 2.0) / libm::tgamma(nf / 2.0)
}

/// Second-order finite-difference gradient of node samples: central in the
/// interior, one-sided (still second-order) at the boundary nodes.
pub fn sample_gradient(spec: &GridSpec, values: &[f64]) -> Vec<f64> {
    let m = values.len();
    debug_assert_eq!(m, spec.node_count());
    let h = spec.spacing();
    let mut g = Vec::with_capacity(m);
    g.push((-1.5 * values[0] + 2.0 * values[1] - 0.5 * values[2]) / h);
    for i in 1..m - 1 {
        g.push((values[i + 1] - values[i - 1]) / (2.0 * h));
    }
    g.push((1.5 * values[m - 1] - 2.0 * values[m - 2] + 0.5 * values[m - 3]) / h);
    g
}
