use serde::{Deserialize, Serialize};
use wps_core::enumeration::Grid;

/// Everything needed to rerun a command and get the same output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub field: String,
    /// One weight vector per factor.
    pub weights: Vec<Vec<u64>>,
    #[serde(default)]
    pub allow_ill_formed: bool,
    #[serde(default)]
    pub divisor: Option<Vec<u64>>,
    #[serde(default)]
    pub bound: Option<f64>,
    #[serde(default)]
    pub grid: Option<Grid>,
    #[serde(default)]
    pub open: Option<String>,
    #[serde(default)]
    pub method: Option<String>,
    #[serde(default)]
    pub mode: Option<String>,
    pub tolerance: f64,
    #[serde(default)]
    pub frame: Option<Frame>,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub point: Option<String>,
    pub budget: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Constant,
    Count,
    Sweep,
    Volume,
    Point,
}

/// Archimedean data for a volume computation without a concrete field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub r1: u32,
    pub r2: u32,
    pub regulator: f64,
}

impl RunManifest {
    pub fn new(command: Command, field: String, weights: Vec<Vec<u64>>) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            field,
            weights,
            allow_ill_formed: false,
            divisor: None,
            bound: None,
            grid: None,
            open: None,
            method: None,
            mode: None,
            tolerance: 1e-12,
            frame: None,
            samples: None,
            seed: None,
            point: None,
            budget: wps_core::enumeration::DEFAULT_BUDGET,
            threads: None,
            wall_time_secs: 0.0,
        }
    }
}

/// A JSON document written by `--json` and read back by `replay`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub manifest: RunManifest,
    pub result: serde_json::Value,
}
