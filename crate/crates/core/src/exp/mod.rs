//! Configuration loading, experiment orchestration, and result serialization.

mod config;
mod run;
mod table;

pub use config::{config_hash, load_config, load_config_str, LoadedConfig};
pub use run::run_experiment;
pub use table::{write_results, Cell, Column, OutputFormat, ResultTable, TableMetadata};

use std::path::PathBuf;

use thiserror::Error;

use crate::energy::EnergyError;
use crate::linkbudget::LinkError;
use crate::metrics::MetricsError;
use crate::optim::{CdParams, OptimError, PsoParams};
use crate::scenario::{EveGrid, Scenario};

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config error: {0}")]
    Parse(String),
    #[error("unknown catalog entry: {0}")]
    UnknownCatalogEntry(String),
    #[error("experiment kind '{kind}' requires a non-empty '{axis}' axis")]
    MissingAxis { kind: String, axis: String },
    #[error("serialization failed: {0}")]
    Serialize(String),
    #[error("sweep point ({point}) failed: {source}")]
    SweepPoint {
        point: String,
        source: Box<ExpError>,
    },
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Optim(#[from] OptimError),
}

/// What to sweep and how; the axes mirror the four studies (path loss,
/// flight time, coverage, secrecy).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub scenario: Scenario,
    pub elements: Vec<usize>,
    pub frequencies_ghz: Vec<f64>,
    pub areas_m2: Vec<f64>,
    pub altitudes_m: Vec<f64>,
    pub reference_snrs_db: Vec<f64>,
    /// Airframe profile for flight-time sweeps, resolved from the catalog.
    pub uav: crate::scenario::UavSpec,
    pub output: String,
    pub format: OutputFormat,
    pub seed: u64,
    pub pso: PsoParams,
    pub cd: CdParams,
    pub quantization_bits: u8,
    pub eve_grid: EveGrid,
}

impl ExperimentSpec {
    pub fn output_path(&self) -> PathBuf {
        PathBuf::from(&self.output)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    PathlossSweep,
    FlighttimeSweep,
    Coverage,
    Secrecy,
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ExperimentKind::PathlossSweep => "pathloss_sweep",
            ExperimentKind::FlighttimeSweep => "flighttime_sweep",
            ExperimentKind::Coverage => "coverage",
            ExperimentKind::Secrecy => "secrecy",
        };
        f.write_str(s)
    }
}
