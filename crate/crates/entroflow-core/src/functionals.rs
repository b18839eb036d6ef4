//! Information functionals on grid densities: Shannon and Rényi entropies,
//! entropy powers, Fisher informations of order p, and the dilation-invariant
//! Λ functional. All entropies are in nats.

use alloc::vec::Vec;

use crate::density::GridDensity;
use crate::error::Error;
use crate::grid::sample_gradient;
use crate::{SUPPORT_FLOOR, SWITCH_EPS};

/// Shannon entropy `H(d) = -int d log d`, with `0 log 0 = 0`.
pub fn shannon_entropy(d: &GridDensity) -> Result<f64, Error> {
    d.require_probability()?;
    let mut acc = 0.0;
    for (i, &v) in d.values().iter().enumerate() {
        if v > 0.0 {
            acc -= d.spec().quad_weight(i) * v * libm::log(v);
        }
    }
    Ok(acc)
}

/// `int d^p` over the grid.
pub fn order_p_integral(d: &GridDensity, p: f64) -> Result<f64, Error> {
    if !(p > 0.0) {
        return Err(Error::InvalidOrder { p });
    }
    let mut acc = 0.0;
    for (i, &v) in d.values().iter().enumerate() {
        if v > 0.0 {
            acc += d.spec().quad_weight(i) * pow_fast(v, p);
        }
    }
    if !acc.is_finite() {
        return Err(Error::NonFiniteDensity);
    }
    Ok(acc)
}

/// Rényi entropy `H_p(d) = log(int d^p) / (1 - p)`, delegating to the Shannon
/// limit when `|p - 1| < SWITCH_EPS`.
pub fn renyi_entropy(d: &GridDensity, p: f64) -> Result<f64, Error> {
    if !(p > 0.0) {
        return Err(Error::InvalidOrder { p });
    }
    if (p - 1.0).abs() < SWITCH_EPS {
        return shannon_entropy(d);
    }
    d.require_probability()?;
    let ip = order_p_integral(d, p)?;
    if !(ip > 0.0) {
        return Err(Error::ZeroMass);
    }
    Ok(libm::log(ip) / (1.0 - p))
}

/// Shannon entropy power `N(d) = exp(2 H / n)`.
pub fn entropy_power(d: &GridDensity) -> Result<f64, Error> {
    let n = d.dimension() as f64;
    Ok(libm::exp(2.0 / n * shannon_entropy(d)?))
}

/// Variance of the Gaussian with the same entropy power: `N(d) / (2 pi e)`.
/// Equals `sigma` exactly when `d` is a centered Gaussian of covariance
/// `sigma I_n`, making the entropy power linear in the variance.
pub fn equivalent_gaussian_variance(d: &GridDensity) -> Result<f64, Error> {
    Ok(entropy_power(d)? / (2.0 * core::f64::consts::PI * core::f64::consts::E))
}

/// Rényi entropy power `N_p(d) = exp((2/n + p - 1) H_p)`, defined for
/// `p > (n-2)/n`.
pub fn renyi_entropy_power(d: &GridDensity, p: f64) -> Result<f64, Error> {
    let n = d.dimension();
    let nf = n as f64;
    if !(p > (nf - 2.0) / nf) {
        return Err(Error::EntropyPowerUndefined { p, n });
    }
    Ok(libm::exp((2.0 / nf + p - 1.0) * renyi_entropy(d, p)?))
}

/// Fisher information `I(d) = int_{d>0} |grad d|^2 / d`.
pub fn fisher_information(d: &GridDensity) -> Result<f64, Error> {
    d.require_probability()?;
    if d.spec().node_count() < 3 {
        return Err(Error::InvalidParameter("gradient needs at least 3 nodes"));
    }
    let grad = sample_gradient(d.spec(), d.values());
    let floor = SUPPORT_FLOOR * d.max_value();
    let mut acc = 0.0;
    for (i, &v) in d.values().iter().enumerate() {
        if v > floor {
            acc += d.spec().quad_weight(i) * grad[i] * grad[i] / v;
        }
    }
    Ok(acc)
}

/// Fisher information of order p:
/// `I_p(d) = (int d^p)^{-1} int_{d>0} |grad d^p|^2 / d`.
pub fn fisher_information_p(d: &GridDensity, p: f64) -> Result<f64, Error> {
    if (p - 1.0).abs() < SWITCH_EPS {
        return fisher_information(d);
    }
    d.require_probability()?;
    let ip = order_p_integral(d, p)?;
    if !(ip > 0.0) {
        return Err(Error::ZeroMass);
    }
    let powered: Vec<f64> = d.values().iter().map(|&v| pow_fast(v, p)).collect();
    let grad = sample_gradient(d.spec(), &powered);
    let floor = SUPPORT_FLOOR * d.max_value();
    let mut acc = 0.0;
    for (i, &v) in d.values().iter().enumerate() {
        if v > floor {
            acc += d.spec().quad_weight(i) * grad[i] * grad[i] / v;
        }
    }
    Ok(acc / ip)
}

/// Dilation-invariant functional `Λ(d) = H_p(d) - (n/2) log E(d)`.
pub fn lambda_functional(d: &GridDensity, p: f64) -> Result<f64, Error> {
    let e = d.second_moment();
    if !(e > 0.0) {
        return Err(Error::ZeroMass);
    }
    let hp = renyi_entropy(d, p)?;
    Ok(hp - d.dimension() as f64 / 2.0 * libm::log(e))
}

/// Every functional of one density at order `p`, evaluated together.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalReport {
    /// Second moment E.
    pub second_moment: f64,
    /// Shannon entropy H (nats).
    pub shannon: f64,
    /// Rényi entropy H_p.
    pub renyi: f64,
    /// Shannon entropy power N.
    pub entropy_power: f64,
    /// Rényi entropy power N_p.
    pub renyi_power: f64,
    /// Fisher information I.
    pub fisher: f64,
    /// Fisher information of order p.
    pub fisher_p: f64,
    /// Λ = H_p - (n/2) log E.
    pub lambda: f64,
    /// The order p used for the Rényi-side quantities.
    pub order: f64,
}

impl FunctionalReport {
    pub fn evaluate(d: &GridDensity, p: f64) -> Result<Self, Error> {
        Ok(FunctionalReport {
            second_moment: d.second_moment(),
            shannon: shannon_entropy(d)?,
            renyi: renyi_entropy(d, p)?,
            entropy_power: entropy_power(d)?,
            renyi_power: renyi_entropy_power(d, p)?,
            fisher: fisher_information(d)?,
            fisher_p: fisher_information_p(d, p)?,
            lambda: lambda_functional(d, p)?,
            order: p,
        })
    }
}

/// `v^p` with fast paths for the orders that dominate solver inner loops.
pub(crate) fn pow_fast(v: f64, p: f64) -> f64 {
    if p == 1.0 {
        v
    } else if p == 2.0 {
        v * v
    } else if p == 3.0 {
        v * v * v
    } else if p == 1.5 {
        v * libm::sqrt(v)
    } else if p == 0.5 {
        libm::sqrt(v)
    } else {
        libm::pow(v, p)
    }
}
