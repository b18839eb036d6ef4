//! Evolution of densities under the heat equation and the nonlinear diffusion
//! equation of order p, with conserved-quantity diagnostics.
//!
//! The heat flow can be advanced exactly as convolution with the Gaussian
//! kernel `M_{2t}` (1D Cartesian); both flows are also available through an
//! explicit conservative finite-difference scheme with an adaptive CFL step
//! `dt = safety * h^2 / (2 n p max v^{p-1})`.

use alloc::vec::Vec;

use crate::density::GridDensity;
use crate::error::Error;
use crate::functionals::{order_p_integral, pow_fast, FunctionalReport};
use crate::grid::Geometry;
use crate::profiles::{gaussian, GaussianParams};
use crate::{DRIFT_TOL, SWITCH_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Exact semigroup: state at t is `d0 * M_{2t}`. Heat only, Cartesian1D.
    ExactConvolution,
    /// Explicit conservative finite differences, any geometry and order.
    ExplicitFd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Diffusion order; 1 is the heat equation.
    pub p: f64,
    /// CFL safety factor in (0, 1].
    pub dt_safety: f64,
    /// Strictly increasing positive sample times.
    pub t_samples: Vec<f64>,
    pub scheme: Scheme,
    /// Regularization threshold for fast diffusion: the nonlinearity is
    /// evaluated at `max(v, floor)` so the diffusivity `p v^{p-1}` cannot
    /// blow up as `v -> 0`, while the front still advances into the tail.
    pub floor: f64,
    /// Allowed per-step relative mass defect before the run is aborted.
    pub drift_tol: f64,
}

impl SolverConfig {
    pub fn heat(t_samples: Vec<f64>) -> Self {
        SolverConfig {
            p: 1.0,
            dt_safety: 0.9,
            t_samples,
            scheme: Scheme::ExactConvolution,
            floor: 0.0,
            drift_tol: DRIFT_TOL,
        }
    }

    pub fn porous(p: f64, t_samples: Vec<f64>) -> Self {
        SolverConfig {
            p,
            dt_safety: 0.9,
            t_samples,
            scheme: Scheme::ExplicitFd,
            floor: if p < 1.0 { 1e-9 } else { 0.0 },
            drift_tol: DRIFT_TOL,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if !(self.p > 0.0) || !self.p.is_finite() {
            return Err(Error::InvalidOrder { p: self.p });
        }
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return Err(Error::InvalidParameter("dt_safety must lie in (0, 1]"));
        }
        if self.t_samples.is_empty() || self.t_samples[0] <= 0.0 {
            return Err(Error::InvalidParameter("t_samples must start above 0"));
        }
        if self.t_samples.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("t_samples must be strictly increasing"));
        }
        if self.floor < 0.0 {
            return Err(Error::InvalidParameter("floor must be nonnegative"));
        }
        Ok(())
    }
}

/// Time-ordered solver output: states at the sample times plus conserved-
/// quantity diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<GridDensity>,
    pub mass: Vec<f64>,
    pub mean: Vec<f64>,
    pub second_moment: Vec<f64>,
    /// `int v^p` per sample, for the nonlinear second-moment law.
    pub order_p_integral: Vec<f64>,
    /// Finite-difference dE/dt per sample interval (length = samples - 1).
    pub de_dt: Vec<f64>,
    /// Accumulated relative mass renormalization applied while stepping.
    pub renorm_drift: f64,
    /// Total mass removed by clipping negative values.
    pub clipped_mass: f64,
}

impl Trajectory {
    fn record(&mut self, t: f64, state: GridDensity, p: f64) -> Result<(), Error> {
        self.times.push(t);
        self.mass.push(state.mass());
        self.mean.push(state.mean());
        self.second_moment.push(state.second_moment());
        self.order_p_integral.push(order_p_integral(&state, p)?);
        if self.times.len() >= 2 {
            let k = self.times.len() - 1;
            let dt = self.times[k] - self.times[k - 1];
            self.de_dt.push((self.second_moment[k] - self.second_moment[k - 1]) / dt);
        }
        self.states.push(state);
        Ok(())
    }

    fn empty() -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            mass: Vec::new(),
            mean: Vec::new(),
            second_moment: Vec::new(),
            order_p_integral: Vec::new(),
            de_dt: Vec::new(),
            renorm_drift: 0.0,
            clipped_mass: 0.0,
        }
    }
}

/// Heat flow from `d0`. The exact-convolution scheme requires a 1D Cartesian
/// grid; `ExplicitFd` works on radial grids as well.
pub fn solve_heat(d0: &GridDensity, cfg: &SolverConfig) -> Result<Trajectory, Error> {
    cfg.validate()?;
    if (cfg.p - 1.0).abs() > SWITCH_EPS {
        return Err(Error::InvalidOrder { p: cfg.p });
    }
    match cfg.scheme {
        Scheme::ExactConvolution => {
            if d0.spec().geometry() != Geometry::Cartesian1D {
                return Err(Error::IncompatibleScheme);
            }
            d0.require_probability()?;
            let mut traj = Trajectory::empty();
            for &t in &cfg.t_samples {
                let params = GaussianParams::new(1, 2.0 * t)?;
                let kernel = gaussian(&params, *d0.spec())?.density;
                let state = d0.convolve(&kernel)?;
                traj.record(t, state, 1.0)?;
            }
            Ok(traj)
        }
        Scheme::ExplicitFd => explicit_evolve(d0, 1.0, cfg),
    }
}

/// Nonlinear diffusion of order p from `d0` by the explicit conservative
/// scheme. `p = 1` recovers the heat flow.
pub fn solve_porous(d0: &GridDensity, cfg: &SolverConfig) -> Result<Trajectory, Error> {
    cfg.validate()?;
    let n = d0.spec().dimension() as f64;
    if !(cfg.p > n / (n + 2.0)) {
        return Err(Error::InvalidOrder { p: cfg.p });
    }
    d0.require_probability()?;
    explicit_evolve(d0, cfg.p, cfg)
}

fn explicit_evolve(d0: &GridDensity, p: f64, cfg: &SolverConfig) -> Result<Trajectory, Error> {
    let spec = *d0.spec();
    let h = spec.spacing();
    let nf = spec.dimension() as f64;
    let nodes = spec.node_count();
    let cells = spec.cells();
    let radial = spec.geometry() == Geometry::RadialND;
    let freeze = if p < 1.0 { cfg.floor.max(f64::MIN_POSITIVE) } else { cfg.floor };

    let quad: Vec<f64> = (0..nodes).map(|i| spec.quad_weight(i)).collect();
    // face factor r_{i+1/2}^{n-1} (1 in the Cartesian case)
    let face: Vec<f64> = (0..cells)
        .map(|i| {
            if radial {
                libm::pow((i as f64 + 0.5) * h, nf - 1.0)
            } else {
                1.0
            }
        })
        .collect();
    let node_meas: Vec<f64> = (0..nodes)
        .map(|i| if radial { libm::pow(spec.node(i), nf - 1.0) } else { 1.0 })
        .collect();

    let mass_of = |v: &[f64]| -> f64 { v.iter().zip(&quad).map(|(a, b)| a * b).sum() };

    let mut v = d0.values().to_vec();
    let m0 = mass_of(&v);
    if !(m0 > 0.0) {
        return Err(Error::ZeroMass);
    }

    let mut traj = Trajectory::empty();
    let mut w = alloc::vec![0.0f64; nodes];
    let mut flux = alloc::vec![0.0f64; cells];
    let mut t = 0.0f64;

    for &target in &cfg.t_samples {
        while t < target * (1.0 - 1e-14) {
            let mut max_diff = 0.0f64;
            for i in 0..nodes {
                let vc = if p < 1.0 { v[i].max(freeze) } else { v[i] };
                w[i] = pow_fast(vc, p);
                if vc > 0.0 {
                    let d = w[i] / vc; // clamped v^{p-1}
                    if d > max_diff {
                        max_diff = d;
                    }
                }
            }
            if !max_diff.is_finite() || max_diff > 1e14 {
                return Err(Error::CflCollapse);
            }
            if max_diff == 0.0 {
                t = target;
                break;
            }
            let mut dt = cfg.dt_safety * h * h / (2.0 * nf * p * max_diff);
            if !(dt > 0.0) {
                return Err(Error::CflCollapse);
            }
            if t + dt > target {
                dt = target - t;
            }

            for i in 0..cells {
                flux[i] = face[i] * (w[i + 1] - w[i]) / h;
            }

            if radial {
                // origin: Laplacian of a symmetric profile is 2n (w1 - w0)/h^2
                v[0] += dt * 2.0 * nf * (w[1] - w[0]) / (h * h);
                for i in 1..cells {
                    v[i] += dt * (flux[i] - flux[i - 1]) / (h * node_meas[i]);
                }
                v[cells] += dt * (-flux[cells - 1]) / (0.5 * h * node_meas[cells]);
            } else {
                v[0] += dt * 2.0 * flux[0] / h;
                for i in 1..cells {
                    v[i] += dt * (flux[i] - flux[i - 1]) / h;
                }
                v[cells] += dt * (-flux[cells - 1]) * 2.0 / h;
            }

            for vi in v.iter_mut() {
                if *vi < 0.0 {
                    traj.clipped_mass -= *vi;
                    *vi = 0.0;
                }
            }

            let m = mass_of(&v);
            let defect = (m - m0).abs() / m0;
            if defect > 1e-3 {
                return Err(Error::MassDrift { drift: defect });
            }
            traj.renorm_drift += defect;
            let scale = m0 / m;
            for vi in v.iter_mut() {
                *vi *= scale;
            }
            if traj.renorm_drift > cfg.drift_tol {
                return Err(Error::MassDrift { drift: traj.renorm_drift });
            }

            t += dt;
        }
        let state = GridDensity::from_values(spec, v.clone())?;
        traj.record(target, state, p)?;
    }
    Ok(traj)
}

/// Functionals and their centered time derivatives along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalTrace {
    pub times: Vec<f64>,
    pub reports: Vec<FunctionalReport>,
    /// Centered differences at interior sample times; `None` at the ends.
    pub d_shannon: Vec<Option<f64>>,
    pub d_renyi: Vec<Option<f64>>,
    pub d_entropy_power: Vec<Option<f64>>,
    pub d_renyi_power: Vec<Option<f64>>,
    pub d_lambda: Vec<Option<f64>>,
    pub d_second_moment: Vec<Option<f64>>,
}

impl FunctionalTrace {
    /// Raw second differences `f_{k+1} - 2 f_k + f_{k-1}` of a report field.
    pub fn second_differences(&self, field: impl Fn(&FunctionalReport) -> f64) -> Vec<f64> {
        let vals: Vec<f64> = self.reports.iter().map(field).collect();
        vals.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect()
    }
}

/// Evaluates every functional at each sample time and forms centered
/// finite-difference time derivatives at the interior samples.
pub fn functional_trace(traj: &Trajectory, p: f64) -> Result<FunctionalTrace, Error> {
    let reports: Result<Vec<FunctionalReport>, Error> =
        traj.states.iter().map(|s| FunctionalReport::evaluate(s, p)).collect();
    let reports = reports?;
    let times = traj.times.clone();
    let centered = |f: &dyn Fn(&FunctionalReport) -> f64| -> Vec<Option<f64>> {
        let k = reports.len();
        (0..k)
            .map(|i| {
                if i == 0 || i + 1 == k {
                    None
                } else {
                    Some((f(&reports[i + 1]) - f(&reports[i - 1])) / (times[i + 1] - times[i - 1]))
                }
            })
            .collect()
    };
    Ok(FunctionalTrace {
        d_shannon: centered(&|r| r.shannon),
        d_renyi: centered(&|r| r.renyi),
        d_entropy_power: centered(&|r| r.entropy_power),
        d_renyi_power: centered(&|r| r.renyi_power),
        d_lambda: centered(&|r| r.lambda),
        d_second_moment: centered(&|r| r.second_moment),
        times,
        reports,
    })
}

/// Least-squares line fit; returns (slope, intercept, max relative residual).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let scale = ys.iter().fold(0.0f64, |a, y| a.max(y.abs())).max(f64::MIN_POSITIVE);
    let resid = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| ((slope * x + intercept - y) / scale).abs())
        .fold(0.0f64, f64::max);
    (slope, intercept, resid)
}
