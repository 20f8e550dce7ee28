//! Exact and brute-force oracles: Hom/Sur counts from cokernel classes,
//! moment formulas by enumeration and by character sums, trivial-part and
//! isotropic-subgroup censuses, and exhaustive group-theoretic counts.

mod brute;
mod census;
mod moments;
mod pairing;
mod sums;

use thiserror::Error;

use crate::groups::GroupError;
use crate::linalg::LinalgError;
use crate::models::ModelError;

pub use brute::{count_automorphisms_by_images, count_surjections, exhaustive_aut_order, tensor_square_orders, TensorSquareOrders};
pub use census::{
    graph_coset_criterion, isotropic_census, isotropic_census_formula, is_trivial_tuple, trivial_part_census,
    trivial_part_count, IsotropicCensus, IsotropicFlavor,
};
pub use moments::{exact_hom_moment, fourier_hom_moment, hom_count_from_class, sur_count, MomentModel, WeightedGraph};
pub use pairing::{Flavor, PairingSpec};
pub use sums::{sin_sum_check, zero_column_bound, AffineMap};

/// Largest number of configurations any oracle enumerates.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("enumeration of {count} cases exceeds the budget of {limit}")]
    TooLargeToEnumerate { count: u128, limit: u64 },
    #[error("character sum has imaginary part {0:e}")]
    ImaginaryResidue(f64),
    #[error("affine map is constant on the subgroup")]
    ConstantMap,
    #[error("invalid affine map: {0}")]
    InvalidMap(&'static str),
    #[error("zero-column count must be at least 1")]
    InvalidCount,
    #[error("level {level} is too low for a group of exponent p^{required}")]
    LevelTooLow { level: u32, required: u32 },
    #[error("model modulus {model} is not divisible by p^d = {level}")]
    ModulusMismatch { model: u64, level: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn check_budget(count: u128) -> Result<(), OracleError> {
    if count > u128::from(ENUMERATION_BUDGET) {
        return Err(OracleError::TooLargeToEnumerate {
            count,
            limit: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}
