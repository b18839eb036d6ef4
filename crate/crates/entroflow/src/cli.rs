//! Command-line dispatch. Exit codes: 0 success / all checks pass, 1 at
//! least one check failed, 2 usage or input error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use entroflow_core::diffusion::{functional_trace, solve_heat, solve_porous, Scheme, SolverConfig};
use entroflow_core::profiles::{
    barenblatt_profile, barenblatt_solution, gamma_np, gaussian, k_gn, theta_branch_a,
    theta_branch_b, BarenblattParams, BuiltProfile, GaussianParams, GnBranch,
};
use entroflow_core::{Geometry, GridDensity, GridSpec};

use crate::config::RunConfig;
use crate::io::{
    constants_csv, read_density, read_report, write_density, write_report, write_trajectory,
    ConstantsRow,
};
use crate::suite::{run_suite, CheckKind, SuiteConfig, SuiteReport};

#[derive(Parser, Debug)]
#[command(
    name = "entroflow",
    version,
    about = "Probability densities on grids: diffusion flows, entropy functionals, and sharp inequality verification",
    arg_required_else_help = true
)]
pub struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overridden by the ENTROFLOW_OUT environment variable).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileKind {
    Gaussian,
    Barenblatt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialKind {
    Gaussian,
    Barenblatt,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    /// Exact Gaussian-convolution semigroup (heat, 1D Cartesian only).
    Exact,
    /// Explicit conservative finite differences.
    Fd,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit an extremal density (Gaussian or Barenblatt) as CSV + JSON.
    Profile {
        #[arg(long, value_enum)]
        kind: ProfileKind,
        #[arg(long)]
        n: Option<u32>,
        /// Gaussian variance parameter.
        #[arg(long)]
        sigma: Option<f64>,
        /// Diffusion order of the Barenblatt profile.
        #[arg(long)]
        p: Option<f64>,
        /// Sample the self-similar solution at this time instead of the profile.
        #[arg(long)]
        t: Option<f64>,
        /// Grid cells.
        #[arg(long)]
        m: Option<usize>,
        /// Grid half-width; defaults to a tail-mass-based suggestion.
        #[arg(long)]
        extent: Option<f64>,
    },
    /// Evolve an initial density under the heat or nonlinear diffusion flow.
    Evolve {
        /// Diffusion order; 1 is the heat equation.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, value_enum)]
        kind: Option<InitialKind>,
        /// Density CSV (with JSON sidecar) for --kind file.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        extent: Option<f64>,
        /// Comma-separated strictly increasing sample times.
        #[arg(long, value_delimiter = ',')]
        t_samples: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        #[arg(long)]
        dt_safety: Option<f64>,
    },
    /// Tabulate sharp constants over a parameter grid.
    Constants {
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
    },
    /// Run the inequality verification suite.
    Verify {
        /// Comma-separated check names, or "all".
        #[arg(long, value_delimiter = ',')]
        check: Option<Vec<String>>,
        /// Restrict dimension-generic batteries to one dimension.
        #[arg(long)]
        n: Option<u32>,
        /// Restrict the order-p batteries to one order.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Grid cells for single densities.
        #[arg(long)]
        m: Option<usize>,
        /// Random densities per battery.
        #[arg(long)]
        mixtures: Option<usize>,
        /// Absolute slack floor for strict inequalities.
        #[arg(long)]
        tol: Option<f64>,
        /// Relative band for equality-expected cases.
        #[arg(long)]
        eq_tol: Option<f64>,
    },
    /// Aggregate reports from prior verify runs.
    Report {
        /// Directories containing report.json files.
        dirs: Vec<PathBuf>,
    },
}

pub fn run(cli: Cli) -> Result<i32, String> {
    let file_cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(|e| e.to_string())?,
        None => RunConfig::default(),
    };
    let out_dir = resolve_out_dir(&cli, &file_cfg);
    match cli.command {
        Command::Profile { kind, n, sigma, p, t, m, extent } => {
            cmd_profile(&file_cfg, &out_dir, kind, n, sigma, p, t, m, extent)
        }
        Command::Evolve { p, kind, input, n, sigma, m, extent, t_samples, scheme, dt_safety } => {
            cmd_evolve(
                &file_cfg, &out_dir, p, kind, input, n, sigma, m, extent, t_samples, scheme,
                dt_safety,
            )
        }
        Command::Constants { n, p } => cmd_constants(&file_cfg, &out_dir, n, p),
        Command::Verify { check, n, p, seed, m, mixtures, tol, eq_tol } => {
            cmd_verify(&file_cfg, &out_dir, check, n, p, seed, m, mixtures, tol, eq_tol)
        }
        Command::Report { dirs } => cmd_report(&out_dir, &dirs),
    }
}

/// ENTROFLOW_OUT overrides the flag, which overrides the config file.
fn resolve_out_dir(cli: &Cli, cfg: &RunConfig) -> PathBuf {
    if let Ok(env) = std::env::var("ENTROFLOW_OUT") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    cli.out
        .clone()
        .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("entroflow-out"))
}

fn warn_tail(built: &BuiltProfile) {
    if built.tail_warning() {
        eprintln!(
            "warning: truncated tail mass {:.3e} exceeds the normalization tolerance; widen --extent",
            built.tail_mass
        );
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_profile(
    cfg: &RunConfig,
    out_dir: &Path,
    kind: ProfileKind,
    n: Option<u32>,
    sigma: Option<f64>,
    p: Option<f64>,
    t: Option<f64>,
    m: Option<usize>,
    extent: Option<f64>,
) -> Result<i32, String> {
    let n = n.or(cfg.n).unwrap_or(1);
    let m = m.or(cfg.cells).unwrap_or(4096);
    let (stem, built) = match kind {
        ProfileKind::Gaussian => {
            let sigma = sigma.or(cfg.sigma).unwrap_or(1.0);
            let params = GaussianParams::new(n, sigma).map_err(|e| e.to_string())?;
            let extent = extent.or(cfg.extent).unwrap_or_else(|| params.suggested_extent());
            let spec = GridSpec::for_dimension(n, extent, m).map_err(|e| e.to_string())?;
            ("gaussian", gaussian(&params, spec).map_err(|e| e.to_string())?)
        }
        ProfileKind::Barenblatt => {
            let p = p.or(cfg.p).unwrap_or(2.0);
            let params = BarenblattParams::new(n, p).map_err(|e| e.to_string())?;
            let extent =
                extent.or(cfg.extent).unwrap_or_else(|| params.suggested_extent(t.unwrap_or(1.0)));
            let spec = GridSpec::for_dimension(n, extent, m).map_err(|e| e.to_string())?;
            let built = match t {
                Some(t) => barenblatt_solution(&params, t, spec),
                None => barenblatt_profile(&params, spec),
            }
            .map_err(|e| e.to_string())?;
            ("barenblatt", built)
        }
    };
    warn_tail(&built);
    let path = write_density(out_dir, stem, &built.density).map_err(|e| e.to_string())?;
    println!(
        "wrote {} (n={n}, m={m}, mass={}, tail_mass={:.3e})",
        path.display(),
        built.density.mass(),
        built.tail_mass
    );
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    cfg: &RunConfig,
    out_dir: &Path,
    p: Option<f64>,
    kind: Option<InitialKind>,
    input: Option<PathBuf>,
    n: Option<u32>,
    sigma: Option<f64>,
    m: Option<usize>,
    extent: Option<f64>,
    t_samples: Option<Vec<f64>>,
    scheme: Option<SchemeArg>,
    dt_safety: Option<f64>,
) -> Result<i32, String> {
    let p = p.or(cfg.p).unwrap_or(1.0);
    let n = n.or(cfg.n).unwrap_or(1);
    let m = m.or(cfg.cells).unwrap_or(4096);
    let times = t_samples
        .or_else(|| cfg.solver.t_samples.clone())
        .unwrap_or_else(|| (1..=8).map(|k| 0.25 * k as f64).collect());
    let t_max = times.last().copied().unwrap_or(1.0);
    let kind = kind.unwrap_or(InitialKind::Gaussian);

    let d0: GridDensity = match kind {
        InitialKind::Gaussian => {
            let sigma = sigma.or(cfg.sigma).unwrap_or(1.0);
            let params = GaussianParams::new(n, sigma).map_err(|e| e.to_string())?;
            let extent = extent
                .or(cfg.extent)
                .unwrap_or_else(|| 12.0 * (sigma + 2.0 * t_max).sqrt());
            let spec = GridSpec::for_dimension(n, extent, m).map_err(|e| e.to_string())?;
            let built = gaussian(&params, spec).map_err(|e| e.to_string())?;
            warn_tail(&built);
            built.density
        }
        InitialKind::Barenblatt => {
            let params = BarenblattParams::new(n, p).map_err(|e| e.to_string())?;
            let extent =
                extent.or(cfg.extent).unwrap_or_else(|| params.suggested_extent(1.0 + t_max));
            let spec = GridSpec::for_dimension(n, extent, m).map_err(|e| e.to_string())?;
            let built = barenblatt_profile(&params, spec).map_err(|e| e.to_string())?;
            warn_tail(&built);
            built.density
        }
        InitialKind::File => {
            let path = input.ok_or("--kind file requires --input")?;
            read_density(&path).map_err(|e| e.to_string())?
        }
    };

    let scheme = match scheme.or_else(|| match cfg.solver.scheme.as_deref() {
        Some("exact") => Some(SchemeArg::Exact),
        Some("fd") => Some(SchemeArg::Fd),
        Some(other) => {
            eprintln!("warning: unknown scheme {other:?} in config ignored");
            None
        }
        None => None,
    }) {
        Some(SchemeArg::Exact) => Scheme::ExactConvolution,
        Some(SchemeArg::Fd) => Scheme::ExplicitFd,
        None => {
            if p == 1.0 && d0.spec().geometry() == Geometry::Cartesian1D {
                Scheme::ExactConvolution
            } else {
                Scheme::ExplicitFd
            }
        }
    };

    let mut solver = if p == 1.0 {
        SolverConfig::heat(times)
    } else {
        SolverConfig::porous(p, times)
    };
    solver.scheme = scheme;
    if let Some(s) = dt_safety.or(cfg.solver.dt_safety) {
        solver.dt_safety = s;
    }
    if let Some(f) = cfg.solver.floor {
        solver.floor = f;
    }

    let traj = if p == 1.0 {
        solve_heat(&d0, &solver)
    } else {
        solve_porous(&d0, &solver)
    }
    .map_err(|e| e.to_string())?;
    let trace = functional_trace(&traj, p).map_err(|e| e.to_string())?;
    write_trajectory(out_dir, &traj, &trace).map_err(|e| e.to_string())?;
    println!(
        "wrote {} snapshots + diagnostics.json to {} (p={p}, renorm_drift={:.3e}, clipped_mass={:.3e})",
        traj.states.len(),
        out_dir.display(),
        traj.renorm_drift,
        traj.clipped_mass
    );
    Ok(0)
}

/// The (branch, q) reading of a diffusion order p under q = 1/(2p-1).
fn gn_data(n: u32, p: f64) -> Option<(f64, f64)> {
    if (p - 1.0).abs() < 1e-12 || p <= 0.5 {
        return None;
    }
    let q = 1.0 / (2.0 * p - 1.0);
    let (branch, theta) = if p < 1.0 {
        (GnBranch::A, theta_branch_a(n, q))
    } else {
        (GnBranch::B, theta_branch_b(n, q))
    };
    match k_gn(n, q, branch) {
        Ok(k) => Some((k.k, theta)),
        Err(_) => None,
    }
}

fn cmd_constants(
    cfg: &RunConfig,
    out_dir: &Path,
    n: Option<Vec<u32>>,
    p: Option<Vec<f64>>,
) -> Result<i32, String> {
    let ns = n.or_else(|| cfg.n.map(|v| vec![v])).unwrap_or_else(|| vec![1]);
    let ps = p
        .or_else(|| cfg.p_list.clone())
        .unwrap_or_else(|| vec![0.75, 0.9, 1.0, 1.5, 2.0, 3.0]);
    let mut rows = Vec::new();
    for &n in &ns {
        for &p in &ps {
            let gamma = gamma_np(n, p).map_err(|e| format!("gamma(n={n}, p={p}): {e}"))?;
            let row = if (p - 1.0).abs() < 1e-12 {
                ConstantsRow {
                    n,
                    p,
                    c: None,
                    lambda: None,
                    mu: 2.0,
                    gamma,
                    k_gn: None,
                    theta: None,
                }
            } else {
                let params =
                    BarenblattParams::new(n, p).map_err(|e| format!("n={n}, p={p}: {e}"))?;
                let gn = gn_data(n, p);
                ConstantsRow {
                    n,
                    p,
                    c: Some(params.mass_constant()),
                    lambda: Some(params.lambda()),
                    mu: params.mu(),
                    gamma,
                    k_gn: gn.map(|g| g.0),
                    theta: gn.map(|g| g.1),
                }
            };
            rows.push(row);
        }
    }
    let csv = constants_csv(&rows);
    std::fs::create_dir_all(out_dir).map_err(|e| e.to_string())?;
    std::fs::write(out_dir.join("constants.csv"), &csv).map_err(|e| e.to_string())?;
    print!("{csv}");
    println!("wrote {}", out_dir.join("constants.csv").display());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    cfg: &RunConfig,
    out_dir: &Path,
    check: Option<Vec<String>>,
    n: Option<u32>,
    p: Option<f64>,
    seed: Option<u64>,
    m: Option<usize>,
    mixtures: Option<usize>,
    tol: Option<f64>,
    eq_tol: Option<f64>,
) -> Result<i32, String> {
    let defaults = SuiteConfig::default();
    let checks = match check.or_else(|| cfg.checks.clone()) {
        None => CheckKind::ALL.to_vec(),
        Some(names) => {
            if names.iter().any(|s| s == "all") {
                CheckKind::ALL.to_vec()
            } else {
                names
                    .iter()
                    .map(|s| CheckKind::parse(s).ok_or_else(|| format!("unknown check {s:?}")))
                    .collect::<Result<Vec<_>, _>>()?
            }
        }
    };
    let suite_cfg = SuiteConfig {
        seed: seed.or(cfg.seed).unwrap_or(defaults.seed),
        mixtures: mixtures.or(cfg.mixtures).unwrap_or(defaults.mixtures),
        cells: m.or(cfg.cells).unwrap_or(defaults.cells),
        pair_cells: cfg.pair_cells.unwrap_or(defaults.pair_cells),
        trajectory_cells: cfg.trajectory_cells.unwrap_or(defaults.trajectory_cells),
        dims: n
            .map(|v| vec![v])
            .or_else(|| cfg.dims.clone())
            .unwrap_or_else(|| defaults.dims.clone()),
        p_list: p
            .map(|v| vec![v])
            .or_else(|| cfg.p_list.clone())
            .unwrap_or_else(|| defaults.p_list.clone()),
        porous_p: p
            .map(|v| vec![v])
            .or_else(|| cfg.porous_p.clone())
            .unwrap_or_else(|| defaults.porous_p.clone()),
        checks,
        slack_floor: tol.or(cfg.slack_floor).unwrap_or(defaults.slack_floor),
        eq_rel: eq_tol.or(cfg.eq_rel).unwrap_or(defaults.eq_rel),
    };
    let report = run_suite(&suite_cfg).map_err(|e| e.to_string())?;
    print_report_summary(&report);
    write_report(out_dir, &report).map_err(|e| e.to_string())?;
    println!("wrote {} and report.csv", out_dir.join("report.json").display());
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn print_report_summary(report: &SuiteReport) {
    let mut names: Vec<&str> = Vec::new();
    for v in &report.verdicts {
        if !names.contains(&v.name.as_str()) {
            names.push(&v.name);
        }
    }
    for name in names {
        let total = report.verdicts.iter().filter(|v| v.name == name).count();
        let passed = report.verdicts.iter().filter(|v| v.name == name && v.pass).count();
        let status = if passed == total { "pass" } else { "FAIL" };
        println!("{name}: {passed}/{total} {status}");
    }
    for v in report.verdicts.iter().filter(|v| !v.pass) {
        println!(
            "  FAIL {} [{}] lhs={} rhs={} slack={} tol={}",
            v.name, v.context, v.lhs, v.rhs, v.slack, v.tol
        );
    }
    println!(
        "{} verdicts, {} passed, {} failed",
        report.verdicts.len(),
        report.passed,
        report.failed
    );
}

fn cmd_report(out_dir: &Path, dirs: &[PathBuf]) -> Result<i32, String> {
    if dirs.is_empty() {
        return Err("report requires at least one directory".into());
    }
    let mut summary = String::from("dir,verdicts,passed,failed\n");
    let mut total_failed = 0usize;
    for dir in dirs {
        let r = read_report(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        total_failed += r.failed;
        summary.push_str(&format!(
            "{},{},{},{}\n",
            dir.display(),
            r.verdicts.len(),
            r.passed,
            r.failed
        ));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| e.to_string())?;
    std::fs::write(out_dir.join("summary.csv"), &summary).map_err(|e| e.to_string())?;
    print!("{summary}");
    println!("wrote {}", out_dir.join("summary.csv").display());
    Ok(if total_failed == 0 { 0 } else { 1 })
}
