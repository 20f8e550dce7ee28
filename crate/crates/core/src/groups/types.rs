use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{FiniteAbelian, GroupError, Partition};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some(p, d)` if `m = p^d` with `d ≥ 1`.
pub fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|d| m % d == 0)?;
    let mut rest = m;
    let mut d = 0;
    while rest % p == 0 {
        rest /= p;
        d += 1;
    }
    (rest == 1).then_some((p, d))
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Isomorphism type of a finite abelian p-group: `Z/p^λ₁ × ⋯ × Z/p^λ_r`.
///
/// Serializes as `{"p": 2, "lambda": [2,1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPGroup")]
pub struct PGroupType {
    p: u64,
    lambda: Partition,
}

#[derive(Deserialize)]
struct RawPGroup {
    p: u64,
    #[serde(default)]
    lambda: Partition,
}

impl TryFrom<RawPGroup> for PGroupType {
    type Error = GroupError;

    fn try_from(raw: RawPGroup) -> Result<Self, Self::Error> {
        PGroupType::new(raw.p, raw.lambda)
    }
}

impl PGroupType {
    pub fn new(p: u64, lambda: Partition) -> Result<Self, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        Ok(PGroupType { p, lambda })
    }

    /// Shorthand for tests and examples; panics on invalid input.
    pub fn of(p: u64, parts: &[u32]) -> Self {
        PGroupType::new(p, Partition::new(parts.to_vec()).expect("valid partition"))
            .expect("prime")
    }

    pub fn trivial(p: u64) -> Result<Self, GroupError> {
        PGroupType::new(p, Partition::empty())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn is_trivial(&self) -> bool {
        self.lambda.is_empty()
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> u32 {
        self.lambda.size()
    }

    /// `log_p` of the exponent.
    pub fn log_exponent(&self) -> u32 {
        self.lambda.largest()
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.log_order())
    }

    /// `|G|` when it fits in a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        self.p.checked_pow(self.log_order())
    }

    pub fn exponent(&self) -> BigUint {
        BigUint::from(self.p).pow(self.log_exponent())
    }

    /// Dimension of `G/pG`.
    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    /// `log_p |G[p^k]|` where `G[p^k]` is the `p^k`-torsion.
    pub fn log_torsion(&self, k: u32) -> u32 {
        self.lambda.parts().iter().map(|&x| x.min(k)).sum()
    }

    /// `G ≅ K × K` for some `K`, i.e. every part occurs an even number of times.
    pub fn is_square(&self) -> bool {
        self.lambda.multiplicities().iter().all(|&(_, m)| m % 2 == 0)
    }

    /// The `K` with `G ≅ K × K`, if it exists.
    pub fn square_root(&self) -> Option<PGroupType> {
        if !self.is_square() {
            return None;
        }
        let parts = self.lambda.parts().iter().step_by(2).copied().collect();
        Some(PGroupType {
            p: self.p,
            lambda: Partition::new(parts).ok()?,
        })
    }

    /// `G × H` for groups over the same prime.
    pub fn product(&self, other: &PGroupType) -> Result<PGroupType, GroupError> {
        if self.p != other.p {
            return Err(GroupError::PrimeMismatch(self.p, other.p));
        }
        Ok(PGroupType {
            p: self.p,
            lambda: self.lambda.union(&other.lambda),
        })
    }

    /// Explicit model `Z/p^λ₁ × ⋯`, guarded by `limit` on the order.
    pub fn explicit(&self, limit: u64) -> Result<FiniteAbelian, GroupError> {
        let moduli = self.cyclic_orders()?;
        FiniteAbelian::new(moduli, limit)
    }

    /// Explicit model of `G × G` (coordinates `(g, h)`), guarded by `limit`.
    pub fn explicit_square(&self, limit: u64) -> Result<FiniteAbelian, GroupError> {
        let mut moduli = self.cyclic_orders()?;
        moduli.extend(moduli.clone());
        FiniteAbelian::new(moduli, limit)
    }

    fn cyclic_orders(&self) -> Result<Vec<u64>, GroupError> {
        self.lambda
            .parts()
            .iter()
            .map(|&x| self.p.checked_pow(x).ok_or(GroupError::GroupTooLarge { limit: u64::MAX }))
            .collect()
    }

    /// All types of order `p^k` for `k ≤ max_log`.
    pub fn all_up_to(p: u64, max_log: u32) -> Result<Vec<PGroupType>, GroupError> {
        (0..=max_log)
            .flat_map(Partition::all_of_size)
            .map(|lam| PGroupType::new(p, lam))
            .collect()
    }
}

impl fmt::Display for PGroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let factors: Vec<String> = self
            .lambda
            .parts()
            .iter()
            .map(|&x| {
                if x == 1 {
                    format!("Z/{}", self.p)
                } else {
                    format!("Z/{}^{}", self.p, x)
                }
            })
            .collect();
        write!(f, "{}", factors.join(" x "))
    }
}

/// A finite abelian group as its Sylow decomposition.
///
/// Serializes as a map from decimal prime strings to partitions,
/// e.g. `{"2": [1], "3": [1]}` for `Z/6`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<u64, Partition>", into = "BTreeMap<u64, Partition>")]
pub struct AbGroupType {
    components: BTreeMap<u64, Partition>,
}

impl AbGroupType {
    pub fn new(components: BTreeMap<u64, Partition>) -> Result<Self, GroupError> {
        let mut clean = BTreeMap::new();
        for (p, lam) in components {
            if !is_prime(p) {
                return Err(GroupError::NotPrime(p));
            }
            if !lam.is_empty() {
                clean.insert(p, lam);
            }
        }
        Ok(AbGroupType { components: clean })
    }

    pub fn trivial() -> Self {
        AbGroupType::default()
    }

    pub fn from_p_groups(parts: impl IntoIterator<Item = PGroupType>) -> Result<Self, GroupError> {
        let mut map: BTreeMap<u64, Partition> = BTreeMap::new();
        for g in parts {
            let entry = map.entry(g.p()).or_default();
            *entry = entry.union(g.lambda());
        }
        AbGroupType::new(map)
    }

    /// Primes dividing the order.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.components.keys().copied()
    }

    /// The Sylow p-subgroup type (trivial when `p` does not divide the order).
    pub fn sylow(&self, p: u64) -> Result<PGroupType, GroupError> {
        PGroupType::new(p, self.components.get(&p).cloned().unwrap_or_default())
    }

    pub fn components(&self) -> &BTreeMap<u64, Partition> {
        &self.components
    }

    pub fn order(&self) -> BigUint {
        self.components
            .iter()
            .fold(BigUint::one(), |acc, (&p, lam)| acc * BigUint::from(p).pow(lam.size()))
    }
}

impl TryFrom<BTreeMap<u64, Partition>> for AbGroupType {
    type Error = GroupError;

    fn try_from(map: BTreeMap<u64, Partition>) -> Result<Self, Self::Error> {
        AbGroupType::new(map)
    }
}

impl From<AbGroupType> for BTreeMap<u64, Partition> {
    fn from(g: AbGroupType) -> Self {
        g.components
    }
}
