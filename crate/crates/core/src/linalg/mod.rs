//! Linear algebra over `Z/p^d`: Smith normal form, ranks over `F_p`, and
//! cokernel classes.

mod cokernel;
mod gf2;
mod matrix;
mod snf;

use thiserror::Error;

pub use cokernel::{cokernel_class, multi_prime_cokernel, rank_mod_p, CokernelClass};
pub use gf2::BitMatrix;
pub use matrix::{IntMatrix, ModMatrix, Symmetry};
pub(crate) use snf::{checked_level, elementary_exponents};
pub use snf::{smith_exponents, smith_normal_form, MAX_MODULUS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modulus {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus {0} must be at least 2")]
    InvalidModulus(u64),
    #[error("modulus {0} exceeds the supported range")]
    ModulusTooLarge(u64),
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entry {entry} is not a residue mod {modulus}")]
    EntryOutOfRange { entry: u64, modulus: u64 },
    #[error("entry ({row}, {col}) violates the {symmetry:?} symmetry")]
    SymmetryViolation { symmetry: Symmetry, row: usize, col: usize },
    #[error("{requested} does not divide the matrix modulus {matrix}")]
    ModulusMismatch { matrix: u64, requested: u64 },
    #[error("target over p = {0} compared with a class over p = {1}")]
    PrimeMismatch(u64, u64),
    #[error("level {level} is too low, need at least {required}")]
    LevelTooLow { level: u32, required: u32 },
}
