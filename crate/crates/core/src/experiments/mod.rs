//! Seeded Monte Carlo campaigns and the oracle verification battery.
//!
//! Every trial draws from its own stream keyed by `(master_seed, name, n,
//! trial)` and workers merge integer tallies, so reports do not depend on
//! the worker count.

mod config;
mod report;
mod runner;
mod runs;
mod stats;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::GroupError;
use crate::linalg::LinalgError;
use crate::models::ModelError;
use crate::oracle::OracleError;
use crate::universal::UniversalError;

pub use config::{DistributionSpec, ExperimentConfig, ExperimentKind, ModelKind};
pub use report::{ClassCount, EstimateReport, GateRule, ReportRow, SizeSummary};
pub use runs::{observed_total, run_cok_dist, run_moment, run_rank_dist, run_sandpile, run_sharpness};
pub use stats::Estimate;
pub use verify::{run_verify, CheckRecord, VerifyReport};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("cannot write report: {0}")]
    Output(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Universal(#[from] UniversalError),
}

/// A replacement `|Aut|` table entry, used to check that the battery
/// notices a wrong expected value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutOverride {
    pub p: u64,
    pub parts: Vec<u32>,
    pub order: u64,
}

fn default_aut_max_order() -> u64 {
    64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOptions {
    /// Largest `|G|` whose automorphisms are counted exhaustively.
    #[serde(default = "default_aut_max_order")]
    pub aut_max_order: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aut_overrides: Vec<AutOverride>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            aut_max_order: default_aut_max_order(),
            aut_overrides: Vec::new(),
        }
    }
}

/// Output of [`run`].
#[derive(Clone, Debug)]
pub enum RunOutput {
    Estimate(EstimateReport),
    Verify(VerifyReport),
}

impl RunOutput {
    pub fn to_json(&self) -> Result<String, ExperimentError> {
        match self {
            RunOutput::Estimate(r) => r.to_json(),
            RunOutput::Verify(r) => r.to_json(),
        }
    }

    pub fn to_csv(&self) -> Result<String, ExperimentError> {
        match self {
            RunOutput::Estimate(r) => r.to_csv(),
            RunOutput::Verify(r) => r.to_csv(),
        }
    }

    /// All gated rows pass, or every verify check passes.
    pub fn passed(&self) -> bool {
        match self {
            RunOutput::Estimate(r) => r.gates_pass(),
            RunOutput::Verify(r) => r.passed,
        }
    }
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    Ok(match config.kind {
        ExperimentKind::CokDist => RunOutput::Estimate(run_cok_dist(config)?),
        ExperimentKind::RankDist => RunOutput::Estimate(run_rank_dist(config)?),
        ExperimentKind::Moment => RunOutput::Estimate(run_moment(config)?),
        ExperimentKind::Sandpile => RunOutput::Estimate(run_sandpile(config)?),
        ExperimentKind::Sharpness => RunOutput::Estimate(run_sharpness(config)?),
        ExperimentKind::Verify => RunOutput::Verify(run_verify(config)?),
    })
}
