use std::fmt;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// A weakly decreasing list of positive integers.
///
/// Partitions index isomorphism types of finite abelian p-groups: the type
/// `(λ₁ ≥ ⋯ ≥ λ_r)` stands for `Z/p^λ₁ × ⋯ × Z/p^λ_r`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, GroupError> {
        if parts.iter().any(|&x| x == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(GroupError::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Sum of the parts.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest part, 0 for the empty partition.
    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// `λ'_j = #{i : λ_i ≥ j}`.
    pub fn conjugate(&self) -> Partition {
        let width = self.largest();
        let parts = (1..=width)
            .map(|j| self.0.iter().filter(|&&x| x >= j).count() as u32)
            .collect();
        Partition(parts)
    }

    /// `(part, multiplicity)` pairs in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &x in &self.0 {
            match out.last_mut() {
                Some((v, m)) if *v == x => *m += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    /// Concatenates and re-sorts.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::from_unsorted(parts)
    }

    /// All partitions of `total`, in reverse lexicographic order.
    pub fn all_of_size(total: u32) -> Vec<Partition> {
        fn rec(remaining: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for x in (1..=remaining.min(max)).rev() {
                prefix.push(x);
                rec(remaining - x, x, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(total, total, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = GroupError;

    fn try_from(parts: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}
