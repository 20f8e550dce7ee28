//! Limiting distributions and moments as truncated infinite products in
//! double-double precision.

mod formulas;
mod product;

use thiserror::Error;

use crate::groups::GroupError;

pub use formulas::{
    cokernel_limit_prob, moment_limit, multi_prime_limit_prob, rank_limit_prob, sandpile_limit_prob, LimitKind,
};
pub use product::{truncated_product, LimitFormulaResult, ProductSpec, PRODUCT_TOLERANCE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniversalError {
    #[error("product terms are not of the form 1 - p^-(a i + b) with a convergent tail")]
    NonconvergentSpec,
    #[error("prime {0} divides |H| but is not in the prime set")]
    MissingPrime(u64),
    #[error("unknown formula kind {0:?}")]
    UnknownKind(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}
