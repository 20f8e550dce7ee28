//! Random entry laws, matrix and graph models, and per-trial RNG streams.

mod distribution;
mod graph;
mod matrix_model;
mod rng;

use thiserror::Error;

pub use distribution::{alpha_schedule, EntryDistribution};
pub use graph::{sample_graph, sample_graph_laplacian, GraphModel, SampledGraph};
pub use matrix_model::{sample_matrix, sample_zero_columns, MatrixModel};
pub use rng::trial_rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("modulus {0} must be at least 2")]
    InvalidModulus(u64),
    #[error("residue {residue} is out of range mod {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("invalid probability {0}")]
    InvalidProbability(String),
    #[error("residues must be distinct")]
    DuplicateResidue,
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(String),
    #[error("alpha = {0} is outside (0, 1/2]")]
    InvalidAlpha(f64),
    #[error("invalid schedule c = {c}, n = {n}")]
    InvalidSchedule { c: f64, n: usize },
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidBeta(f64),
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("({row}, {col}) is not a free position of the model")]
    InvalidOverride { row: usize, col: usize },
}
