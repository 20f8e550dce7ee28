//! Finite abelian p-group combinatorics: partitions and group types, orders
//! of `Aut`, `∧²`, `Sym²`, subgroup lattices with their Möbius function, and
//! brute-force counts of perfect pairings and symplectic groups.

mod finite;
mod orders;
mod pairings;
mod partition;
mod types;

use thiserror::Error;

pub use finite::{enumerate_subgroups, moebius, FiniteAbelian, SubgroupLattice, SubgroupRecord, ENUMERATION_LIMIT};
pub use orders::{
    alternating_pairing_count, aut_order, conjugate, ext_square_order, sp_order_formula, sym_square_order,
    symmetric_pairing_count, tensor_square_order,
};
pub use pairings::{
    count_isometries, count_symmetric_perfect_on_factors, count_symmetric_perfect_pairings, hyperbolic_gram,
    sp_order, DotPairing, GRAM_SCAN_LIMIT, ISOMETRY_NODE_LIMIT,
};
pub use partition::Partition;
pub use types::{is_prime, prime_divisors, prime_power, AbGroupType, PGroupType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a partition (parts must be positive and weakly decreasing): {0:?}")]
    InvalidPartition(Vec<u32>),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cyclic factor order {0} must be at least 2")]
    InvalidModulus(u64),
    #[error("group exceeds the enumeration guard of {limit} elements")]
    GroupTooLarge { limit: u64 },
    #[error("element set is not a subgroup of the ambient group")]
    NotASubgroup,
    #[error("group is not a p-group for p = {0}")]
    NotAPGroup(u64),
    #[error("type has an odd multiplicity, so it is not of the form G x G")]
    NotInSp,
    #[error("groups over different primes: {0} and {1}")]
    PrimeMismatch(u64, u64),
    #[error("pairing level {level} is below the group exponent")]
    LevelTooLow { level: u32 },
    #[error("invalid form: {0}")]
    InvalidForm(&'static str),
}
