//! Cokernels of random matrices over `Z/p^d` and sandpile groups of random
//! graphs.
//!
//! The crate evaluates the universal limiting distributions and moments of
//! these cokernels, estimates them by seeded Monte Carlo, and cross-checks the
//! algebraic ingredients against exhaustive oracles at small sizes.

pub mod experiments;
pub mod groups;
pub mod linalg;
pub mod models;
pub mod oracle;
pub mod universal;

pub use groups::{AbGroupType, GroupError, PGroupType, Partition};
pub use linalg::{CokernelClass, IntMatrix, LinalgError, ModMatrix, Symmetry};
