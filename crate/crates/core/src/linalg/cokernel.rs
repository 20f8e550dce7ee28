use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::gf2::{ones, BitMatrix};
use super::snf::{checked_level, elementary_exponents};
use super::{IntMatrix, LinalgError, ModMatrix};
use crate::groups::{PGroupType, Partition};

/// `cok(A) ⊗ Z/p^d`: the parts of the cokernel type capped at `d`.
///
/// Serializes as `{"p":2,"d":3,"lambda":[2,1],"saturated":0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CokernelClass {
    p: u64,
    d: u32,
    #[serde(rename = "lambda")]
    capped_lambda: Partition,
    #[serde(rename = "saturated")]
    saturated_parts: u32,
}

impl CokernelClass {
    /// From Smith exponents in `[0, d]`; zero exponents are dropped.
    pub fn from_exponents(p: u64, d: u32, exponents: &[u32]) -> Self {
        let parts: Vec<u32> = exponents.iter().copied().filter(|&v| v > 0).map(|v| v.min(d)).collect();
        let saturated_parts = parts.iter().filter(|&&v| v == d).count() as u32;
        CokernelClass {
            p,
            d,
            capped_lambda: Partition::from_unsorted(parts),
            saturated_parts,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn lambda(&self) -> &Partition {
        &self.capped_lambda
    }

    pub fn saturated(&self) -> u32 {
        self.saturated_parts
    }

    /// Dimension of `cok(A) ⊗ F_p`, i.e. the corank mod `p`.
    pub fn p_rank(&self) -> usize {
        self.capped_lambda.len()
    }

    /// The cokernel type when no part reached the level.
    pub fn finite_type(&self) -> Option<PGroupType> {
        (self.saturated_parts == 0).then(|| PGroupType::new(self.p, self.capped_lambda.clone()).expect("prime checked on construction"))
    }

    /// `cok(A) ≅ H`; needs `d > e` where `p^e` is the exponent of `H`.
    pub fn is_isomorphic_to(&self, h: &PGroupType) -> Result<bool, LinalgError> {
        self.check_target(h, 1)?;
        Ok(self.saturated_parts == 0 && &self.capped_lambda == h.lambda())
    }

    /// `cok(A) ≅ Z_p × H` up to a cyclic part of order at least `p^d`;
    /// needs `d ≥ e + 2`.
    pub fn is_free_plus(&self, h: &PGroupType) -> Result<bool, LinalgError> {
        self.check_target(h, 2)?;
        let expected = h.lambda().union(&Partition::new(vec![self.d]).expect("positive level"));
        Ok(self.saturated_parts == 1 && self.capped_lambda == expected)
    }

    fn check_target(&self, h: &PGroupType, margin: u32) -> Result<(), LinalgError> {
        if h.p() != self.p {
            return Err(LinalgError::PrimeMismatch(h.p(), self.p));
        }
        if self.d < h.log_exponent() + margin {
            return Err(LinalgError::LevelTooLow {
                level: self.d,
                required: h.log_exponent() + margin,
            });
        }
        Ok(())
    }
}

impl fmt::Display for CokernelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} sat={}", self.capped_lambda, self.saturated_parts)
    }
}

fn residues_mod(a: &ModMatrix, m: u64) -> Result<Vec<u64>, LinalgError> {
    if a.modulus() % m != 0 {
        return Err(LinalgError::ModulusMismatch {
            matrix: a.modulus(),
            requested: m,
        });
    }
    Ok(if a.modulus() == m {
        a.entries().to_vec()
    } else {
        a.entries().iter().map(|&x| x % m).collect()
    })
}

const PRECHECK_MIN: usize = 32;

/// Class of `cok(A) ⊗ Z/p^d`; `p^d` must divide the modulus of `A`.
pub fn cokernel_class(a: &ModMatrix, p: u64, d: u32) -> Result<CokernelClass, LinalgError> {
    let m = checked_level(p, d)?;
    let n = a.n();
    if p == 2 && d == 1 {
        if a.modulus() % 2 != 0 {
            return Err(LinalgError::ModulusMismatch {
                matrix: a.modulus(),
                requested: 2,
            });
        }
        let corank = n - BitMatrix::from_residues(n, n, a.entries()).rank();
        return Ok(CokernelClass::from_exponents(2, 1, &vec![1; corank]));
    }
    let data = residues_mod(a, m)?;
    // Invertible mod 2 means invertible mod 2^d; the bit-packed rank is far
    // cheaper than the elimination over Z/2^d.
    if p == 2 && n >= PRECHECK_MIN {
        let bits = BitMatrix::from_residues(n, n, &data);
        if d == 2 {
            return Ok(level_two_class(&bits, &data, n));
        }
        if bits.rank() == n {
            return Ok(CokernelClass::from_exponents(2, d, &[]));
        }
    }
    Ok(CokernelClass::from_exponents(p, d, &elementary_exponents(data, n, n, p, d)))
}

/// `cok(A) ⊗ Z/4` from the mod-2 kernels: with `Y`, `X` bases of the
/// left and right kernels of `A mod 2`, the parts equal to 1 number
/// `rank((Yᵀ A X / 2) mod 2)`.
fn level_two_class(bits: &BitMatrix, data: &[u64], n: usize) -> CokernelClass {
    let (left, right) = bits.kernels();
    let k = left.len();
    if k == 0 {
        return CokernelClass::from_exponents(2, 2, &[]);
    }
    let mut m = BitMatrix::zeros(k, k);
    for (a, y) in left.iter().enumerate() {
        let mut ya = vec![0u64; n];
        for i in ones(y) {
            for (acc, &v) in ya.iter_mut().zip(&data[i * n..(i + 1) * n]) {
                *acc += v;
            }
        }
        for (b, x) in right.iter().enumerate() {
            let s: u64 = ones(x).map(|j| ya[j]).sum();
            debug_assert_eq!(s % 2, 0);
            if s % 4 == 2 {
                m.set(a, b, true);
            }
        }
    }
    let ones_count = m.rank();
    let mut parts = vec![2; k - ones_count];
    parts.extend(std::iter::repeat(1).take(ones_count));
    CokernelClass::from_exponents(2, 2, &parts)
}

/// Rank of `A mod p`; `p` must divide the modulus.
pub fn rank_mod_p(a: &ModMatrix, p: u64) -> Result<usize, LinalgError> {
    let n = a.n();
    if p == 2 {
        checked_level(2, 1)?;
        residues_mod(a, 2)?;
        return Ok(BitMatrix::from_residues(n, n, a.entries()).rank());
    }
    Ok(n - cokernel_class(a, p, 1)?.p_rank())
}

/// Per-prime classes of `cok(A) ⊗ Z/p^{d_p}` for an integer matrix.
pub fn multi_prime_cokernel(a: &IntMatrix, levels: &BTreeMap<u64, u32>) -> Result<BTreeMap<u64, CokernelClass>, LinalgError> {
    levels
        .iter()
        .map(|(&p, &d)| {
            let m = checked_level(p, d)?;
            let reduced = a.reduce(m)?;
            Ok((p, cokernel_class(&reduced, p, d)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Symmetry;

    fn mat(n: usize, m: u64, e: &[u64]) -> ModMatrix {
        ModMatrix::new(n, m, e.to_vec(), Symmetry::General).unwrap()
    }

    #[test]
    fn class_examples() {
        let c = cokernel_class(&ModMatrix::identity(4, 27), 3, 3).unwrap();
        assert!(c.lambda().is_empty() && c.saturated() == 0);
        let c = cokernel_class(&ModMatrix::zero(3, 4, Symmetry::General), 2, 2).unwrap();
        assert_eq!(c.lambda().parts(), &[2, 2, 2]);
        assert_eq!(c.saturated(), 3);
        let c = cokernel_class(&mat(2, 9, &[2, 1, 1, 2]), 3, 2).unwrap();
        assert_eq!(c.lambda().parts(), &[1]);
        assert_eq!(c.saturated(), 0);
        assert!(c.is_isomorphic_to(&PGroupType::of(3, &[1])).unwrap());
        assert!(!c.is_isomorphic_to(&PGroupType::of(3, &[])).unwrap());
        assert!(matches!(c.is_isomorphic_to(&PGroupType::of(3, &[2])), Err(LinalgError::LevelTooLow { .. })));
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"p":3,"d":2,"lambda":[1],"saturated":0}"#);
    }

    #[test]
    fn gf2_fast_path_agrees() {
        let a = mat(3, 2, &[1, 1, 0, 1, 1, 0, 0, 0, 0]);
        let c = cokernel_class(&a, 2, 1).unwrap();
        assert_eq!(c.lambda().parts(), &[1, 1]);
        assert_eq!(c.saturated(), 2);
        assert_eq!(rank_mod_p(&a, 2).unwrap(), 1);
        assert_eq!(rank_mod_p(&mat(2, 2, &[1, 1, 1, 1]), 2).unwrap(), 1);
        assert_eq!(rank_mod_p(&ModMatrix::identity(5, 7), 7).unwrap(), 5);
        assert_eq!(rank_mod_p(&ModMatrix::zero(5, 7, Symmetry::General), 7).unwrap(), 0);
        assert!(rank_mod_p(&ModMatrix::identity(2, 9), 2).is_err());
    }

    #[test]
    fn free_part_detection() {
        // cok = Z/3 ⊕ Z/27 at level 3 reads as Z_3 × Z/3.
        let a = mat(2, 27, &[3, 0, 0, 0]);
        let c = cokernel_class(&a, 3, 3).unwrap();
        assert!(c.is_free_plus(&PGroupType::of(3, &[1])).unwrap());
        assert!(!c.is_free_plus(&PGroupType::of(3, &[])).unwrap());
        assert!(c.is_free_plus(&PGroupType::of(3, &[2])).is_err());
    }

    #[test]
    fn multi_prime_examples() {
        let levels: BTreeMap<u64, u32> = [(2, 2), (3, 2)].into();
        let out = multi_prime_cokernel(&IntMatrix::diagonal(&[6, 1]), &levels).unwrap();
        assert_eq!(out[&2].lambda().parts(), &[1]);
        assert_eq!(out[&3].lambda().parts(), &[1]);
        let out = multi_prime_cokernel(&IntMatrix::identity(3), &levels).unwrap();
        assert!(out.values().all(|c| c.lambda().is_empty()));
        let out = multi_prime_cokernel(&IntMatrix::diagonal(&[0]), &[(2, 3)].into()).unwrap();
        assert_eq!(out[&2].lambda().parts(), &[3]);
        assert_eq!(out[&2].saturated(), 1);
    }

    #[test]
    fn level_two_shortcut_matches_elimination() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut seen = std::collections::BTreeSet::new();
        for trial in 0..300 {
            let n = rng.gen_range(PRECHECK_MIN..90);
            let a = if trial % 2 == 0 {
                let density = rng.gen_range(0.01..0.2);
                let entries: Vec<u64> = (0..n * n).map(|_| if rng.gen_bool(density) { rng.gen_range(1..4) } else { 0 }).collect();
                mat(n, 4, &entries)
            } else {
                // U·D·V with a prescribed diagonal of 0s, 1s, 2s and 3s.
                let diag: Vec<u64> = (0..n).map(|_| [0, 1, 1, 2, 3][rng.gen_range(0..5)]).collect();
                let u = mat(n, 4, &(0..n * n).map(|_| rng.gen_range(0..4)).collect::<Vec<_>>());
                let v = mat(n, 4, &(0..n * n).map(|_| rng.gen_range(0..4)).collect::<Vec<_>>());
                ModMatrix::diagonal(&diag, 4).unwrap().multiply_both(&u, &v).unwrap()
            };
            let fast = cokernel_class(&a, 2, 2).unwrap();
            let slow = CokernelClass::from_exponents(2, 2, &elementary_exponents(a.entries().to_vec(), n, n, 2, 2));
            assert_eq!(fast, slow, "trial {trial}");
            seen.insert((fast.lambda().len(), fast.saturated()));
        }
        assert!(seen.len() > 10);
    }
}
