//! Closed-form extremal densities (Gaussian, Barenblatt) and the sharp
//! constants computed from them.
//!
//! The Barenblatt profile of order p is `(C - lambda |x|^2)_+^{1/(p-1)}` with
//! `mu = 2 + n(p-1)` and `lambda = (p-1)/(2 mu p)`; `C` fixes unit mass and is
//! found by bisection on the quadrature mass integral, which is monotone in C.
//! The constants `gamma_{n,p}` and `K_GN` have no closed form here: they are
//! defined operationally by evaluating the corresponding functionals on the
//! extremal at doubling resolutions until two refinements agree.

use alloc::vec::Vec;

use crate::density::GridDensity;
use crate::error::Error;
use crate::functionals::{fisher_information_p, renyi_entropy_power};
use crate::grid::{unit_sphere_area, GridSpec};
use crate::{GAMMA_TOL, SWITCH_EPS};

use core::f64::consts::{E, PI};

/// Mean-zero Gaussian with covariance `sigma I_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    n: u32,
    sigma: f64,
}

impl GaussianParams {
    pub fn new(n: u32, sigma: f64) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1"));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParameter("sigma must be positive"));
        }
        Ok(GaussianParams { n, sigma })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Density value at radius r.
    pub fn value(&self, r: f64) -> f64 {
        let norm = libm::pow(2.0 * PI * self.sigma, -(self.n as f64) / 2.0);
        norm * libm::exp(-r * r / (2.0 * self.sigma))
    }

    /// Half-width at which the truncated tail mass drops below 1e-8.
    pub fn suggested_extent(&self) -> f64 {
        12.0 * libm::sqrt(self.sigma)
    }
}

/// Barenblatt parameters for dimension n and order p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarenblattParams {
    n: u32,
    p: f64,
    mu: f64,
    lambda: f64,
    c: f64,
}

impl BarenblattParams {
    /// Validates admissibility (`p > n/(n+2)`, `p != 1`) and solves for the
    /// mass-normalizing constant C.
    pub fn new(n: u32, p: f64) -> Result<Self, Error> {
        check_admissible(n, p)?;
        let c = solve_barenblatt_c(n, p)?;
        Ok(Self::with_c(n, p, c))
    }

    fn with_c(n: u32, p: f64, c: f64) -> Self {
        let mu = 2.0 + n as f64 * (p - 1.0);
        let lambda = (p - 1.0) / (2.0 * mu * p);
        BarenblattParams { n, p, mu, lambda, c }
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> f64 {
        self.p
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mass_constant(&self) -> f64 {
        self.c
    }

    /// Profile value at radius r: `(C - lambda r^2)_+^{1/(p-1)}`.
    pub fn value(&self, r: f64) -> f64 {
        let s = self.c - self.lambda * r * r;
        if s <= 0.0 {
            0.0
        } else {
            libm::pow(s, 1.0 / (self.p - 1.0))
        }
    }

    /// Support radius `sqrt(C/lambda)` for p > 1; `None` for fast diffusion,
    /// whose profile is positive everywhere.
    pub fn support_radius(&self) -> Option<f64> {
        (self.p > 1.0).then(|| libm::sqrt(self.c / self.lambda))
    }

    /// Radius beyond which the truncated contributions to mass, second moment
    /// and the order-p integrals fall below `threshold`. For p > 1 this is the
    /// support radius.
    pub fn eval_radius(&self, threshold: f64) -> f64 {
        if let Some(r) = self.support_radius() {
            return r;
        }
        tail_radius(self.n, self.p, self.lambda, threshold)
    }

    /// Extent covering the self-similar solution up to time `t`.
    pub fn suggested_extent(&self, t: f64) -> f64 {
        let base = self.eval_radius(1e-10);
        base * libm::pow(t.max(1.0), 1.0 / self.mu) * 1.05
    }
}

fn check_admissible(n: u32, p: f64) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1"));
    }
    let nf = n as f64;
    if !p.is_finite() || !(p > nf / (nf + 2.0)) {
        return Err(Error::InvalidOrder { p });
    }
    if (p - 1.0).abs() < SWITCH_EPS {
        return Err(Error::InvalidOrder { p });
    }
    Ok(())
}

/// All integrands of interest share the tail exponent `n + 2p/(p-1) < 0` for
/// admissible fast diffusion; invert the resulting power-law bound.
fn tail_radius(n: u32, p: f64, lambda: f64, threshold: f64) -> f64 {
    let alpha = 1.0 / (p - 1.0);
    let beta = n as f64 + 2.0 * p * alpha;
    debug_assert!(beta < 0.0);
    let abs_lambda = lambda.abs();
    let ln_r = (libm::log(threshold) + libm::log(-beta)
        - libm::log(unit_sphere_area(n))
        - alpha * libm::log(abs_lambda))
        / beta;
    let r = libm::exp(ln_r);
    // never smaller than a few multiples of the core scale sqrt(C-ish/|lambda|)
    r.max(4.0 / libm::sqrt(abs_lambda * 2.0 * (2.0 + n as f64 * (p - 1.0))))
}

/// Mass of `(C - lambda |x|^2)_+^{1/(p-1)}` over R^n by radial quadrature.
fn barenblatt_mass(n: u32, p: f64, c: f64) -> f64 {
    let params = BarenblattParams::with_c(n, p, c);
    let alpha = 1.0 / (p - 1.0);
    let r_max = params.eval_radius(1e-14);
    let m = 1 << 16;
    let h = r_max / m as f64;
    let omega = unit_sphere_area(n);
    let mut acc = 0.0;
    for i in 0..=m {
        let r = i as f64 * h;
        let trap = if i == 0 || i == m { 0.5 } else { 1.0 };
        acc += trap * h * omega * libm::pow(r, (n - 1) as f64) * params.value(r);
    }
    if p < 1.0 {
        // analytic bound on the truncated tail keeps the bisection honest
        let beta = n as f64 + 2.0 * alpha;
        acc += omega * libm::exp(alpha * libm::log(-params.lambda) + beta * libm::log(r_max))
            / -beta;
    }
    acc
}

/// C such that the Barenblatt profile has unit mass, by bisection with
/// analytic bracket growth; mass is strictly increasing in C.
pub fn solve_barenblatt_c(n: u32, p: f64) -> Result<f64, Error> {
    check_admissible(n, p)?;
    // Mass scales like C^{1/(p-1) + n/2}: increasing in C for slow diffusion
    // (p > 1) but decreasing for fast diffusion (p < 1).
    let increasing = p > 1.0;
    let mass_defect = |c: f64| {
        let m = barenblatt_mass(n, p, c);
        if increasing {
            m - 1.0
        } else {
            1.0 - m
        }
    };
    let mut lo = 1.0f64;
    let mut hi = 1.0f64;
    let mut grow = 0;
    while mass_defect(lo) > 0.0 {
        lo /= 4.0;
        grow += 1;
        if grow > 600 {
            return Err(Error::BracketFailure);
        }
    }
    while mass_defect(hi) < 0.0 {
        hi *= 4.0;
        grow += 1;
        if grow > 600 {
            return Err(Error::BracketFailure);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d = mass_defect(mid);
        if d.abs() < 1e-12 || (hi - lo) < 1e-15 * mid {
            return Ok(mid);
        }
        if d < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A sampled profile plus the mass the grid could not hold.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltProfile {
    /// The normalized density on the requested grid.
    pub density: GridDensity,
    /// Tail mass lost to domain truncation, estimated before normalization.
    pub tail_mass: f64,
}

impl BuiltProfile {
    /// True when the truncated tail exceeds the normalization tolerance; the
    /// caller decides whether to surface it.
    pub fn tail_warning(&self) -> bool {
        self.tail_mass > crate::MASS_TOL
    }
}

/// Samples the Gaussian `M_sigma` on `spec` and normalizes on-grid.
pub fn gaussian(params: &GaussianParams, spec: GridSpec) -> Result<BuiltProfile, Error> {
    if spec.dimension() != params.dimension() {
        return Err(Error::GridMismatch);
    }
    let raw = GridDensity::from_fn(spec, |x| params.value(x))?;
    let tail_mass = (1.0 - raw.mass()).max(0.0);
    Ok(BuiltProfile { density: raw.normalize()?, tail_mass })
}

/// Samples the time-independent Barenblatt profile `M~_p` on `spec`.
pub fn barenblatt_profile(params: &BarenblattParams, spec: GridSpec) -> Result<BuiltProfile, Error> {
    if spec.dimension() != params.dimension() {
        return Err(Error::GridMismatch);
    }
    let raw = GridDensity::from_fn(spec, |x| params.value(x))?;
    let tail_mass = (1.0 - raw.mass()).max(0.0);
    Ok(BuiltProfile { density: raw.normalize()?, tail_mass })
}

/// Samples the self-similar solution `M_p(x, t) = t^{-n/mu} M~_p(x t^{-1/mu})`.
pub fn barenblatt_solution(
    params: &BarenblattParams,
    t: f64,
    spec: GridSpec,
) -> Result<BuiltProfile, Error> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("self-similar form requires t > 0"));
    }
    if spec.dimension() != params.dimension() {
        return Err(Error::GridMismatch);
    }
    let scale = libm::pow(t, -1.0 / params.mu);
    let amp = libm::pow(t, -(params.n as f64) / params.mu);
    let raw = GridDensity::from_fn(spec, |x| amp * params.value(x * scale))?;
    let tail_mass = (1.0 - raw.mass()).max(0.0);
    Ok(BuiltProfile { density: raw.normalize()?, tail_mass })
}

/// The sharp isoperimetric constant `gamma_{n,p} = N_p(M~_p) I_p(M~_p)`,
/// by quadrature on the extremal with doubling resolution until two
/// refinements agree to `GAMMA_TOL` relative. `p = 1` returns `2 pi e n`.
pub fn gamma_np(n: u32, p: f64) -> Result<f64, Error> {
    let nf = n as f64;
    if (p - 1.0).abs() < SWITCH_EPS {
        return Ok(2.0 * PI * E * nf);
    }
    if !(p > (nf - 2.0) / nf) {
        return Err(Error::EntropyPowerUndefined { p, n });
    }
    let params = BarenblattParams::new(n, p)?;
    let r_max = params.eval_radius(1e-13);
    let mut prev: Option<f64> = None;
    let mut last_change = f64::INFINITY;
    let mut cells = 8192usize;
    while cells <= (1 << 21) {
        let spec = GridSpec::for_dimension(n, r_max, cells)?;
        let d = barenblatt_profile(&params, spec)?.density;
        let g = renyi_entropy_power(&d, p)? * fisher_information_p(&d, p)?;
        if let Some(prev) = prev {
            last_change = ((g - prev) / g).abs();
            if last_change < GAMMA_TOL {
                return Ok(g);
            }
        }
        prev = Some(g);
        cells *= 2;
    }
    Err(Error::NoConvergence { last_change })
}

/// Which of the two sharp Gagliardo-Nirenberg families is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnBranch {
    /// `||u||_{2q} <= K ||grad u||_2^theta ||u||_{q+1}^{1-theta}`,
    /// `1 < q <= n/(n-2)`; fast-diffusion side (p < 1).
    A,
    /// `||u||_{q+1} <= K ||grad u||_2^theta ||u||_{2q}^{1-theta}`,
    /// `0 < q < 1`; porous-medium side (p > 1).
    B,
}

/// A sharp GN constant together with the exponents that define it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnConstant {
    pub n: u32,
    pub q: f64,
    pub branch: GnBranch,
    /// Diffusion order recovered from `q = 1/(2p-1)`.
    pub p: f64,
    pub theta: f64,
    pub k: f64,
}

/// Interpolation exponent of branch A, as stated with the inequality.
pub fn theta_branch_a(n: u32, q: f64) -> f64 {
    let nf = n as f64;
    (nf / q) * (q - 1.0) / (nf + 2.0 - q * (nf - 2.0))
}

/// Interpolation exponent of branch B, fixed by scale invariance of the
/// inequality.
pub fn theta_branch_b(n: u32, q: f64) -> f64 {
    let nf = n as f64;
    nf * (1.0 - q) / ((q + 1.0) * (nf - q * (nf - 2.0)))
}

/// Interpolation exponent of the general `L^p / L^q` interpolation form
/// `||u||_p <= K ||grad u||_2^theta ||u||_q^{1-theta}`.
pub fn theta_general(n: u32, q: f64, p: f64) -> f64 {
    let nf = n as f64;
    2.0 * nf * (1.0 - q / p) / (2.0 * nf - q * (nf - 2.0))
}

fn check_branch(n: u32, q: f64, branch: GnBranch) -> Result<(), Error> {
    if !q.is_finite() || q <= 0.0 {
        return Err(Error::InvalidParameter("q must be positive"));
    }
    match branch {
        GnBranch::A => {
            if q <= 1.0 {
                return Err(Error::InvalidParameter("branch A requires q > 1"));
            }
            if n > 2 && q > n as f64 / (n as f64 - 2.0) + 1e-12 {
                return Err(Error::InvalidParameter("branch A requires q <= n/(n-2)"));
            }
            // the Sobolev endpoint theta = 1 is outside the method's range
            if n > 2 && (q - n as f64 / (n as f64 - 2.0)).abs() < 1e-9 {
                return Err(Error::InvalidParameter("Sobolev endpoint q = n/(n-2) excluded"));
            }
        }
        GnBranch::B => {
            if q >= 1.0 {
                return Err(Error::InvalidParameter("branch B requires 0 < q < 1"));
            }
        }
    }
    Ok(())
}

/// Norm data of a GN candidate function on a grid.
pub(crate) struct GnNorms {
    pub target: f64,
    pub companion: f64,
    pub grad: f64,
}

pub(crate) fn gn_norms(u: &GridDensity, q: f64, branch: GnBranch) -> GnNorms {
    let l2q = u.lp_norm(2.0 * q);
    let lq1 = u.lp_norm(q + 1.0);
    let grad = u.grad_l2_norm();
    match branch {
        GnBranch::A => GnNorms { target: l2q, companion: lq1, grad },
        GnBranch::B => GnNorms { target: lq1, companion: l2q, grad },
    }
}

/// Truncation radius for GN norm quadrature when the optimizer has algebraic
/// tails (p < 1). The optimizer decays like `r^-kappa` with
/// `kappa = 2(p - 1/2)/(1 - p)`; each norm integrand then has a power-law
/// tail whose truncated contribution is inverted in log space, exactly as in
/// `tail_radius` but with the GN exponents instead of the (much slower)
/// Fisher-information exponent.
fn gn_tail_radius(n: u32, p: f64, q: f64, lambda: f64) -> f64 {
    let kappa = 2.0 * (p - 0.5) / (1.0 - p);
    let omega = unit_sphere_area(n);
    let l = lambda.abs();
    let threshold = 1e-10f64;
    // (norm exponent s, extra decay, extra log-amplitude): the two Lebesgue
    // norms and the squared gradient, whose tail gains kappa^2 / r^2.
    let terms = [
        (q + 1.0, 0.0, 0.0),
        (2.0 * q, 0.0, 0.0),
        (2.0, 2.0, 2.0 * libm::log(kappa)),
    ];
    let mut r_max: f64 = 0.0;
    for &(s, extra, log_amp_extra) in &terms {
        let e = n as f64 - s * kappa - extra;
        debug_assert!(e < 0.0);
        let log_amp = libm::log(omega) - s * kappa / 2.0 * libm::log(l) + log_amp_extra;
        let ln_r = (libm::log(threshold) - log_amp + libm::log(-e)) / e;
        r_max = r_max.max(libm::exp(ln_r));
    }
    // always cover the profile core, whose width is of order 1/sqrt(|lambda|)
    r_max.max(8.0 / libm::sqrt(l))
}

/// Radius on which the GN optimizer for `(n, q)` can be evaluated accurately:
/// the profile support for p > 1, and the power-law truncation radius of the
/// GN norm integrands for p < 1. This is the radius `k_gn` itself uses, so
/// callers evaluating the optimizer on a grid should use it too.
pub fn gn_eval_radius(n: u32, q: f64, branch: GnBranch) -> Result<f64, Error> {
    check_branch(n, q, branch)?;
    let p = (q + 1.0) / (2.0 * q);
    let params = BarenblattParams::new(n, p)?;
    if p > 1.0 {
        Ok(params.eval_radius(1e-13))
    } else {
        Ok(gn_tail_radius(n, p, q, params.lambda()))
    }
}

/// The sharp GN constant for `(n, q)` on the requested branch, evaluated at
/// the Barenblatt-substituted optimizer `u* = (M~_p)^{p-1/2}` with
/// `p = (q+1)/(2q)`, refined until two resolutions agree.
pub fn k_gn(n: u32, q: f64, branch: GnBranch) -> Result<GnConstant, Error> {
    check_branch(n, q, branch)?;
    let p = (q + 1.0) / (2.0 * q);
    let theta = match branch {
        GnBranch::A => theta_branch_a(n, q),
        GnBranch::B => theta_branch_b(n, q),
    };
    let params = BarenblattParams::new(n, p)?;
    let r_max = gn_eval_radius(n, q, branch)?;
    let mut prev: Option<f64> = None;
    let mut last_change = f64::INFINITY;
    let mut cells = 8192usize;
    while cells <= (1 << 21) {
        let spec = GridSpec::for_dimension(n, r_max, cells)?;
        let f = barenblatt_profile(&params, spec)?.density;
        let u_vals: Vec<f64> = f.values().iter().map(|&v| crate::functionals::pow_fast(v, p - 0.5)).collect();
        let u = GridDensity::from_values(spec, u_vals)?;
        let norms = gn_norms(&u, q, branch);
        let k = norms.target
            / (libm::pow(norms.grad, theta) * libm::pow(norms.companion, 1.0 - theta));
        if let Some(prev) = prev {
            last_change = ((k - prev) / k).abs();
            if last_change < GAMMA_TOL {
                return Ok(GnConstant { n, q, branch, p, theta, k });
            }
        }
        prev = Some(k);
        cells *= 2;
    }
    Err(Error::NoConvergence { last_change })
}
