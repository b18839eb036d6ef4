//! JSON run configuration. Every field is optional; resolution order is
//! command-line flag, then config file, then built-in default. The structure
//! round-trips losslessly through its JSON serialization.

use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfigFile {
    pub dt_safety: Option<f64>,
    pub floor: Option<f64>,
    pub t_samples: Option<Vec<f64>>,
    /// "exact" (heat convolution) or "fd".
    pub scheme: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand the config is intended for; informational.
    pub command: Option<String>,
    pub out_dir: Option<String>,
    pub seed: Option<u64>,
    /// Grid cells for single densities.
    pub cells: Option<usize>,
    pub pair_cells: Option<usize>,
    pub trajectory_cells: Option<usize>,
    /// Grid half-width override.
    pub extent: Option<f64>,
    pub n: Option<u32>,
    pub p: Option<f64>,
    pub sigma: Option<f64>,
    pub mixtures: Option<usize>,
    pub dims: Option<Vec<u32>>,
    pub p_list: Option<Vec<f64>>,
    pub porous_p: Option<Vec<f64>>,
    pub checks: Option<Vec<String>>,
    pub slack_floor: Option<f64>,
    pub eq_rel: Option<f64>,
    pub solver: SolverConfigFile,
}

impl RunConfig {
    pub fn load(path: &Path) -> io::Result<RunConfig> {
        let body = fs::read_to_string(path)?;
        serde_json::from_str(&body)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("{path:?}: {e}")))
    }
}
