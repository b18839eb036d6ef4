//! Named, tolerance-bearing inequality checks. Each check evaluates one sharp
//! inequality on concrete densities and reports a signed slack; the sign
//! convention is always `slack >= -tol` on pass, with equality cases
//! additionally required to sit within a relative band.

use alloc::format;
use alloc::string::String;

use crate::density::GridDensity;
use crate::error::Error;
use crate::functionals::{
    entropy_power, fisher_information, fisher_information_p, lambda_functional, order_p_integral,
    renyi_entropy_power,
};
use crate::grid::{sample_gradient, Geometry};
use crate::profiles::{gn_norms, GnConstant};

use core::f64::consts::{E, PI};

/// Pass/fail bounds: an absolute slack floor for strict inequalities and a
/// relative band for equality-expected cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub slack_floor: f64,
    pub eq_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { slack_floor: 1e-6, eq_rel: 1e-3 }
    }
}

/// Outcome of one inequality check.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityVerdict {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Signed so that the inequality reads `slack >= 0`.
    pub slack: f64,
    /// The tolerance actually applied to this verdict.
    pub tol: f64,
    pub equality_expected: bool,
    pub pass: bool,
    pub context: String,
}

impl InequalityVerdict {
    fn build(
        name: &str,
        lhs: f64,
        rhs: f64,
        slack: f64,
        equality_expected: bool,
        tol: &Tolerances,
        context: String,
    ) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(1e-300);
        let (bound, pass) = if equality_expected {
            let band = tol.eq_rel * scale;
            (band, slack.abs() <= band)
        } else {
            (tol.slack_floor, slack >= -tol.slack_floor)
        };
        InequalityVerdict {
            name: String::from(name),
            lhs,
            rhs,
            slack,
            tol: bound,
            equality_expected,
            pass,
            context,
        }
    }
}

/// `E(d) I(d) >= n^2`; equality at Gaussians.
pub fn check_moment_fisher(
    d: &GridDensity,
    equality_expected: bool,
    tol: &Tolerances,
) -> Result<InequalityVerdict, Error> {
    let n = d.dimension() as f64;
    let lhs = d.second_moment() * fisher_information(d)?;
    let rhs = n * n;
    Ok(InequalityVerdict::build(
        "moment_fisher",
        lhs,
        rhs,
        lhs - rhs,
        equality_expected,
        tol,
        format!("n={}", d.dimension()),
    ))
}

/// `E(d) I_p(d) >= n^2 int d^p`; equality at the Barenblatt profile.
pub fn check_moment_fisher_p(
    d: &GridDensity,
    p: f64,
    equality_expected: bool,
    tol: &Tolerances,
) -> Result<InequalityVerdict, Error> {
    let n = d.dimension() as f64;
    let lhs = d.second_moment() * fisher_information_p(d, p)?;
    let rhs = n * n * order_p_integral(d, p)?;
    Ok(InequalityVerdict::build(
        "moment_fisher_p",
        lhs,
        rhs,
        lhs - rhs,
        equality_expected,
        tol,
        format!("n={} p={}", d.dimension(), p),
    ))
}

/// Isoperimetric inequality for entropies: `N(d) I(d) >= 2 pi e n`.
pub fn check_isoperimetric(
    d: &GridDensity,
    equality_expected: bool,
    tol: &Tolerances,
) -> Result<InequalityVerdict, Error> {
    let n = d.dimension() as f64;
    let lhs = entropy_power(d)? * fisher_information(d)?;
    let rhs = 2.0 * PI * E * n;
    Ok(InequalityVerdict::build(
        "isoperimetric",
        lhs,
        rhs,
        lhs - rhs,
        equality_expected,
        tol,
        format!("n={}", d.dimension()),
    ))
}

/// Order-p isoperimetric inequality: `N_p(d) I_p(d) >= gamma_{n,p}`.
/// `gamma` is supplied by the caller (see `profiles::gamma_np`) so batteries
/// can reuse one converged constant.
pub fn check_isoperimetric_p(
    d: &GridDensity,
    p: f64,
    gamma: f64,
    equality_expected: bool,
    tol: &Tolerances,
) -> Result<InequalityVerdict, Error> {
    let lhs = renyi_entropy_power(d, p)? * fisher_information_p(d, p)?;
    Ok(InequalityVerdict::build(
        "isoperimetric_p",
        lhs,
        gamma,
        lhs - gamma,
        equality_expected,
        tol,
        format!("n={} p={}", d.dimension(), p),
    ))
}

/// `Λ(d) <= Λ(M~_p)`; `lambda_extremal` is Λ at the Barenblatt profile.
pub fn check_lambda_bound(
    d: &GridDensity,
    p: f64,
    lambda_extremal: f64,
    equality_expected: bool,
    tol: &Tolerances,
) -> Result<InequalityVerdict, Error> {
    let lhs = lambda_functional(d, p)?;
    Ok(InequalityVerdict::build(
        "lambda_bound",
        lhs,
        lambda_extremal,
        lambda_extremal - lhs,
        equality_expected,
        tol,
        format!("n={} p={}", d.dimension(), p),
    ))
}

fn require_centered_cartesian(d: &GridDensity) -> Result<(), Error> {
    if d.spec().geometry() != Geometry::Cartesian1D {
        return Err(Error::ConvolutionRequiresCartesian);
    }
    if d.mean().abs() > 1e-6 {
        return Err(Error::InvalidParameter("convolution checks require centered densities"));
    }
    Ok(())
}

/// Shannon entropy power inequality: `N(X+Y) >= N(X) + N(Y)`.
pub fn check_epi(
    d1: &GridDensity,
    d2: &GridDensity,
    equality_expected: bool,
    tol: &Tolerances,
) -> Result<InequalityVerdict, Error> {
    require_centered_cartesian(d1)?;
    require_centered_cartesian(d2)?;
    let conv = d1.convolve(d2)?;
    let lhs = entropy_power(&conv)?;
    let rhs = entropy_power(d1)? + entropy_power(d2)?;
    Ok(InequalityVerdict::build(
        "epi",
        lhs,
        rhs,
        lhs - rhs,
        equality_expected,
        tol,
        String::from("n=1"),
    ))
}

/// Blachman-Stam: `1/I(X+Y) >= 1/I(X) + 1/I(Y)`.
pub fn check_blachman_stam(
    d1: &GridDensity,
    d2: &GridDensity,
    equality_expected: bool,
    tol: &Tolerances,
) -> Result<InequalityVerdict, Error> {
    require_centered_cartesian(d1)?;
    require_centered_cartesian(d2)?;
    let conv = d1.convolve(d2)?;
    let lhs = fisher_information(&conv)?.recip();
    let rhs = fisher_information(d1)?.recip() + fisher_information(d2)?.recip();
    Ok(InequalityVerdict::build(
        "blachman_stam",
        lhs,
        rhs,
        lhs - rhs,
        equality_expected,
        tol,
        String::from("n=1"),
    ))
}

/// Nash's interpolation inequality with the asymptotically sharp constant:
/// `(int g^2)^{1+2/n} <= (2/(pi e n)) (int g)^{4/n} int |grad g|^2`.
pub fn check_nash(g: &GridDensity, tol: &Tolerances) -> Result<InequalityVerdict, Error> {
    let n = g.dimension() as f64;
    let l1 = g.integrate(|_| 1.0)?;
    let mut l2sq = 0.0;
    let grad = sample_gradient(g.spec(), g.values());
    let mut grad_sq = 0.0;
    for (i, &v) in g.values().iter().enumerate() {
        let w = g.spec().quad_weight(i);
        l2sq += w * v * v;
        grad_sq += w * grad[i] * grad[i];
    }
    let lhs = 2.0 / (PI * E * n) * libm::pow(l1, 4.0 / n) * grad_sq;
    let rhs = libm::pow(l2sq, 1.0 + 2.0 / n);
    Ok(InequalityVerdict::build(
        "nash",
        lhs,
        rhs,
        lhs - rhs,
        false,
        tol,
        format!("n={}", g.dimension()),
    ))
}

/// Sharp Gagliardo-Nirenberg inequality on the branch carried by `k`:
/// the target norm must not exceed `K ||grad u||^theta ||u||^{1-theta}`.
pub fn check_gn(
    u: &GridDensity,
    k: &GnConstant,
    equality_expected: bool,
    tol: &Tolerances,
) -> Result<InequalityVerdict, Error> {
    if u.dimension() != k.n {
        return Err(Error::GridMismatch);
    }
    let norms = gn_norms(u, k.q, k.branch);
    let lhs = k.k * libm::pow(norms.grad, k.theta) * libm::pow(norms.companion, 1.0 - k.theta);
    let rhs = norms.target;
    Ok(InequalityVerdict::build(
        "gn",
        lhs,
        rhs,
        lhs - rhs,
        equality_expected,
        tol,
        format!("n={} q={} branch={:?}", k.n, k.q, k.branch),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::profiles::{
        barenblatt_profile, gaussian, gamma_np, k_gn, BarenblattParams, GaussianParams, GnBranch,
    };
    use alloc::vec::Vec;

    fn gaussian_1d(sigma: f64, extent: f64, cells: usize) -> GridDensity {
        let spec = GridSpec::cartesian_1d(extent, cells).unwrap();
        gaussian(&GaussianParams::new(1, sigma).unwrap(), spec).unwrap().density
    }

    fn bimodal(extent: f64, cells: usize) -> GridDensity {
        let spec = GridSpec::cartesian_1d(extent, cells).unwrap();
        let g = |x: f64, m: f64, s: f64| (-(x - m) * (x - m) / (2.0 * s)).exp();
        GridDensity::from_fn(spec, |x| g(x, -1.5, 0.4) + g(x, 1.5, 0.4))
            .unwrap()
            .normalize()
            .unwrap()
    }

    #[test]
    fn moment_fisher_gaussian_equality_and_mixture_slack() {
        let tol = Tolerances::default();
        let v = check_moment_fisher(&gaussian_1d(1.3, 16.0, 4096), true, &tol).unwrap();
        assert!(v.pass, "{v:?}");
        let v = check_moment_fisher(&bimodal(16.0, 4096), false, &tol).unwrap();
        assert!(v.pass && v.slack > 0.1, "{v:?}");
    }

    #[test]
    fn moment_fisher_slack_is_dilation_invariant() {
        let tol = Tolerances::default();
        let d = bimodal(24.0, 4096);
        let s0 = check_moment_fisher(&d, false, &tol).unwrap().slack;
        let s1 = check_moment_fisher(&d.dilate(1.3).unwrap(), false, &tol).unwrap().slack;
        assert!((s0 - s1).abs() < 1e-2 * s0.abs().max(1.0), "{s0} vs {s1}");
    }

    #[test]
    fn moment_fisher_p_equality_at_barenblatt() {
        let tol = Tolerances::default();
        let params = BarenblattParams::new(1, 2.0).unwrap();
        let spec = GridSpec::cartesian_1d(params.eval_radius(1e-12), 4096).unwrap();
        let d = barenblatt_profile(&params, spec).unwrap().density;
        let v = check_moment_fisher_p(&d, 2.0, true, &tol).unwrap();
        assert!(v.pass, "{v:?}");
        // Gaussian at p = 2 is strictly suboptimal
        let g = gaussian_1d(1.0, 16.0, 4096);
        let v = check_moment_fisher_p(&g, 2.0, false, &tol).unwrap();
        assert!(v.pass && v.slack > 1e-3, "{v:?}");
    }

    #[test]
    fn isoperimetric_gaussian_equality_uniform_slack() {
        let tol = Tolerances::default();
        let v = check_isoperimetric(&gaussian_1d(0.7, 14.0, 4096), true, &tol).unwrap();
        assert!(v.pass, "{v:?}");
        // smoothed near-uniform bump has strictly positive slack
        let spec = GridSpec::cartesian_1d(8.0, 4096).unwrap();
        let plateau = GridDensity::from_fn(spec, |x| 1.0 / (1.0 + (4.0 * (x.abs() - 1.0)).exp()))
            .unwrap()
            .normalize()
            .unwrap();
        let v = check_isoperimetric(&plateau, false, &tol).unwrap();
        assert!(v.pass && v.slack > 0.1, "{v:?}");
    }

    #[test]
    fn isoperimetric_p_reduces_to_isoperimetric_at_p1() {
        let tol = Tolerances::default();
        let d = gaussian_1d(1.0, 14.0, 4096);
        let gamma = gamma_np(1, 1.0).unwrap();
        let a = check_isoperimetric_p(&d, 1.0, gamma, true, &tol).unwrap();
        let b = check_isoperimetric(&d, true, &tol).unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-12);
        assert!(a.pass && b.pass);
    }

    #[test]
    fn lambda_bound_convention() {
        let tol = Tolerances::default();
        let p = 2.0;
        let params = BarenblattParams::new(1, p).unwrap();
        let spec = GridSpec::cartesian_1d(6.0, 4096).unwrap();
        let m = barenblatt_profile(&params, spec).unwrap().density;
        let lam_ext = lambda_functional(&m, p).unwrap();
        // the profile itself achieves equality, dilates too
        let v = check_lambda_bound(&m, p, lam_ext, true, &tol).unwrap();
        assert!(v.pass, "{v:?}");
        let v = check_lambda_bound(&m.dilate(1.2).unwrap(), p, lam_ext, true, &tol).unwrap();
        assert!(v.pass, "{v:?}");
        // any other density sits strictly below
        let v = check_lambda_bound(&gaussian_1d(1.0, 6.0, 4096), p, lam_ext, false, &tol).unwrap();
        assert!(v.pass && v.slack > 1e-3, "{v:?}");
    }

    #[test]
    fn epi_gaussian_equality_and_strict_case() {
        let tol = Tolerances::default();
        let g1 = gaussian_1d(0.8, 20.0, 2048);
        let g2 = gaussian_1d(1.4, 20.0, 2048);
        let v = check_epi(&g1, &g2, true, &tol).unwrap();
        assert!(v.pass, "{v:?}");
        let v = check_epi(&g1, &bimodal(20.0, 2048), false, &tol).unwrap();
        assert!(v.pass && v.slack > 1e-3, "{v:?}");
    }

    #[test]
    fn epi_near_delta_slack_shrinks() {
        let tol = Tolerances::default();
        let g = gaussian_1d(1.0, 20.0, 2048);
        let narrow = gaussian_1d(0.02, 20.0, 2048);
        let v = check_epi(&g, &narrow, false, &tol).unwrap();
        assert!(v.pass && v.slack.abs() < 0.05, "{v:?}");
    }

    #[test]
    fn blachman_stam_gaussian_equality() {
        let tol = Tolerances::default();
        let g1 = gaussian_1d(1.0, 20.0, 2048);
        let g2 = gaussian_1d(2.0, 20.0, 2048);
        let v = check_blachman_stam(&g1, &g2, true, &tol).unwrap();
        assert!(v.pass, "{v:?}");
        // 1/I(Z_sigma) = n sigma
        assert!((fisher_information(&g1).unwrap().recip() - 1.0).abs() < 1e-4);
        let v = check_blachman_stam(&g1, &bimodal(20.0, 2048), false, &tol).unwrap();
        assert!(v.pass && v.slack > 1e-4, "{v:?}");
    }

    #[test]
    fn nash_holds_for_gaussian_and_scaled_bumps() {
        let tol = Tolerances::default();
        let g = gaussian_1d(1.0, 14.0, 2048);
        let v = check_nash(&g, &tol).unwrap();
        assert!(v.pass && v.slack > 0.0, "{v:?}");
        // homogeneity: scaled function still passes, slack scales
        let scaled = GridDensity::from_values(
            *g.spec(),
            g.values().iter().map(|x| 3.0 * x).collect::<Vec<f64>>(),
        )
        .unwrap();
        let vs = check_nash(&scaled, &tol).unwrap();
        assert!(vs.pass, "{vs:?}");
        let v3 = check_nash(&bimodal(14.0, 2048), &tol).unwrap();
        assert!(v3.pass, "{v3:?}");
    }

    #[test]
    fn gn_optimizer_equality_both_branches() {
        let tol = Tolerances::default();
        for &(n, q, branch) in
            &[(1u32, 2.0f64, GnBranch::A), (1, 0.5, GnBranch::B), (3, 1.5, GnBranch::A)]
        {
            let k = k_gn(n, q, branch).unwrap();
            let params = BarenblattParams::new(n, k.p).unwrap();
            let spec = GridSpec::for_dimension(n, params.eval_radius(1e-12), 8192).unwrap();
            let f = barenblatt_profile(&params, spec).unwrap().density;
            let u = GridDensity::from_values(
                spec,
                f.values().iter().map(|&v| libm::pow(v, k.p - 0.5)).collect::<Vec<f64>>(),
            )
            .unwrap();
            let v = check_gn(&u, &k, true, &tol).unwrap();
            assert!(v.pass, "{v:?}");
            // dilated optimizer stays extremal (scale invariance)
            let v = check_gn(&u.dilate(1.2).unwrap(), &k, true, &tol).unwrap();
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn gn_gaussian_is_strictly_inside() {
        let tol = Tolerances::default();
        let k = k_gn(1, 2.0, GnBranch::A).unwrap();
        let v = check_gn(&gaussian_1d(1.0, 14.0, 4096), &k, false, &tol).unwrap();
        assert!(v.pass && v.slack > 1e-4, "{v:?}");
    }
}
