//! File formats: density CSV + JSON header, trajectory snapshot directories
//! with a diagnostics manifest, sharp-constant tables, and suite reports.
//! All numeric output goes through Rust's shortest round-trip float
//! formatting and field order is fixed by struct definitions, so identical
//! runs produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use entroflow_core::diffusion::{FunctionalTrace, Trajectory};
use entroflow_core::{FunctionalReport, Geometry, GridDensity};
use serde::{Deserialize, Serialize};

use crate::suite::SuiteReport;

fn geometry_name(g: Geometry) -> &'static str {
    match g {
        Geometry::Cartesian1D => "cartesian1d",
        Geometry::RadialND => "radial",
    }
}

/// The JSON sidecar of a density CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityHeader {
    pub geometry: String,
    pub n: u32,
    pub m: usize,
    pub r_max: f64,
    pub mass: f64,
}

impl DensityHeader {
    pub fn of(d: &GridDensity) -> Self {
        DensityHeader {
            geometry: geometry_name(d.spec().geometry()).to_string(),
            n: d.dimension(),
            m: d.spec().cells(),
            r_max: d.spec().extent(),
            mass: d.mass(),
        }
    }
}

/// `coordinate,value` rows over every grid node.
pub fn density_csv(d: &GridDensity) -> String {
    let mut out = String::from("coordinate,value\n");
    for (i, &v) in d.values().iter().enumerate() {
        let _ = writeln!(out, "{},{}", d.spec().node(i), v);
    }
    out
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`; returns the CSV path.
pub fn write_density(dir: &Path, stem: &str, d: &GridDensity) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    fs::write(&csv_path, density_csv(d))?;
    let header = serde_json::to_string_pretty(&DensityHeader::of(d))
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    fs::write(dir.join(format!("{stem}.json")), header + "\n")?;
    Ok(csv_path)
}

/// Serializable mirror of a `FunctionalReport`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalRecord {
    pub second_moment: f64,
    pub shannon: f64,
    pub renyi: f64,
    pub entropy_power: f64,
    pub renyi_power: f64,
    pub fisher: f64,
    pub fisher_p: f64,
    pub lambda: f64,
    pub order: f64,
}

impl From<&FunctionalReport> for FunctionalRecord {
    fn from(r: &FunctionalReport) -> Self {
        FunctionalRecord {
            second_moment: r.second_moment,
            shannon: r.shannon,
            renyi: r.renyi,
            entropy_power: r.entropy_power,
            renyi_power: r.renyi_power,
            fisher: r.fisher,
            fisher_p: r.fisher_p,
            lambda: r.lambda,
            order: r.order,
        }
    }
}

/// The manifest written next to trajectory snapshots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryManifest {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub mean: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub order_p_integral: Vec<f64>,
    pub de_dt: Vec<f64>,
    pub renorm_drift: f64,
    pub clipped_mass: f64,
    pub functionals: Vec<FunctionalRecord>,
}

/// Writes one CSV snapshot per sample time (`snapshot_000.csv`, ...) plus
/// `diagnostics.json` into `dir`.
pub fn write_trajectory(
    dir: &Path,
    traj: &Trajectory,
    trace: &FunctionalTrace,
) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for (k, state) in traj.states.iter().enumerate() {
        fs::write(dir.join(format!("snapshot_{k:03}.csv")), density_csv(state))?;
    }
    let manifest = TrajectoryManifest {
        times: traj.times.clone(),
        mass: traj.mass.clone(),
        mean: traj.mean.clone(),
        second_moment: traj.second_moment.clone(),
        order_p_integral: traj.order_p_integral.clone(),
        de_dt: traj.de_dt.clone(),
        renorm_drift: traj.renorm_drift,
        clipped_mass: traj.clipped_mass,
        functionals: trace.reports.iter().map(FunctionalRecord::from).collect(),
    };
    let body = serde_json::to_string_pretty(&manifest)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    fs::write(dir.join("diagnostics.json"), body + "\n")
}

/// One row of the sharp-constant table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub n: u32,
    pub p: f64,
    /// Absent at p = 1, where the profile degenerates to the Gaussian.
    pub c: Option<f64>,
    pub lambda: Option<f64>,
    pub mu: f64,
    pub gamma: f64,
    /// Absent at p = 1 and whenever the branch mapping excludes (n, q).
    pub k_gn: Option<f64>,
    pub theta: Option<f64>,
}

pub fn constants_csv(rows: &[ConstantsRow]) -> String {
    let mut out = String::from("n,p,C,lambda,mu,gamma,K_GN,theta\n");
    for r in rows {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n,
            r.p,
            opt(r.c),
            opt(r.lambda),
            r.mu,
            r.gamma,
            opt(r.k_gn),
            opt(r.theta)
        );
    }
    out
}

pub fn report_csv(report: &SuiteReport) -> String {
    let mut out = String::from("name,context,lhs,rhs,slack,tol,equality_expected,pass\n");
    for v in &report.verdicts {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            v.name, v.context, v.lhs, v.rhs, v.slack, v.tol, v.equality_expected, v.pass
        );
    }
    out
}

/// Writes `report.json` and `report.csv` into `dir`.
pub fn write_report(dir: &Path, report: &SuiteReport) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let body = serde_json::to_string_pretty(report)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    fs::write(dir.join("report.json"), body + "\n")?;
    fs::write(dir.join("report.csv"), report_csv(report))
}

pub fn read_report(dir: &Path) -> io::Result<SuiteReport> {
    let body = fs::read_to_string(dir.join("report.json"))?;
    serde_json::from_str(&body).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}

/// Reads a density back from a CSV + JSON header pair (the `profile` output
/// format), for `evolve --kind file`.
pub fn read_density(csv_path: &Path) -> io::Result<GridDensity> {
    use entroflow_core::GridSpec;
    let header_path = csv_path.with_extension("json");
    let header: DensityHeader = serde_json::from_str(&fs::read_to_string(&header_path)?)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    let spec = match header.geometry.as_str() {
        "cartesian1d" => GridSpec::cartesian_1d(header.r_max, header.m),
        "radial" => GridSpec::radial_nd(header.n, header.r_max, header.m),
        other => {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("unknown geometry {other:?}"),
            ))
        }
    }
    .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
    let body = fs::read_to_string(csv_path)?;
    let mut values = Vec::with_capacity(spec.node_count());
    for (lineno, line) in body.lines().enumerate() {
        if lineno == 0 {
            continue; // header row
        }
        let value = line
            .split(',')
            .nth(1)
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| {
                io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("bad CSV row {}: {line:?}", lineno + 1),
                )
            })?;
        values.push(value);
    }
    GridDensity::from_values(spec, values)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))
}
