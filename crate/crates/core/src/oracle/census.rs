use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::pairing::{Flavor, PairingSpec};
use super::{check_budget, OracleError};
use crate::groups::{ext_square_order, sym_square_order, FiniteAbelian, PGroupType, SubgroupRecord, ENUMERATION_LIMIT};

/// Whether `U` and `B` vanish on every entry and pair of the tuple.
pub fn is_trivial_tuple(spec: &PairingSpec, tuple: &[usize]) -> bool {
    tuple.iter().all(|&x| spec.u(x) == 0) && tuple.iter().all(|&x| tuple.iter().all(|&y| spec.b(x, y) == 0))
}

/// `|G_tr|` for `n`-tuples by exhaustive search.
pub fn trivial_part_count(spec: &PairingSpec, n: usize) -> Result<u64, OracleError> {
    let size = spec.square_order() as u128;
    check_budget(size.checked_pow(n as u32).unwrap_or(u128::MAX))?;
    let admissible: Vec<usize> = (0..spec.square_order())
        .filter(|&x| spec.u(x) == 0 && spec.b(x, x) == 0)
        .collect();
    fn extend(spec: &PairingSpec, admissible: &[usize], chosen: &mut Vec<usize>, n: usize) -> u64 {
        if chosen.len() == n {
            return 1;
        }
        let mut total = 0;
        for &x in admissible {
            if chosen.iter().all(|&y| spec.b(x, y) == 0 && spec.b(y, x) == 0) {
                chosen.push(x);
                total += extend(spec, admissible, chosen, n);
                chosen.pop();
            }
        }
        total
    }
    Ok(extend(spec, &admissible, &mut Vec::with_capacity(n), n))
}

/// Number of `n`-tuples generating a group of type `w`:
/// `(|W|/p^r)^n ∏_{i<r} (p^n − p^i)`.
fn generating_tuples(w: &PGroupType, n: usize) -> BigUint {
    let p = BigUint::from(w.p());
    let r = w.rank();
    if r > n {
        return BigUint::zero();
    }
    let mut out = p.pow((w.log_order() - r as u32) * n as u32);
    for i in 0..r {
        out *= p.pow(n as u32) - p.pow(i as u32);
    }
    out
}

fn square(spec: &PairingSpec) -> Result<FiniteAbelian, OracleError> {
    Ok(spec.group().explicit_square(ENUMERATION_LIMIT)?)
}

/// Subgroups `W ≤ G²` on which `U` and `B` vanish identically.
fn isotropic_subgroups(spec: &PairingSpec) -> Result<Vec<SubgroupRecord>, OracleError> {
    let ambient = square(spec)?;
    Ok(ambient
        .subgroups()
        .into_iter()
        .filter(|w| is_trivial_tuple(spec, w.elements()))
        .collect())
}

/// `|G_tr|` from the subgroup census: tuples are grouped by the subgroup
/// they generate (by the differences `x_k − x_n` for graphs).
pub fn trivial_part_census(spec: &PairingSpec, n: usize) -> Result<BigUint, OracleError> {
    let g = spec.group();
    let p = g.p();
    match spec.flavor() {
        Flavor::U1B1 => {
            // B(x_k, x_l) = g_k · h_l = 0 for all k, l forces every h into
            // the annihilator of H = ⟨g_1, …, g_n⟩, of order |G|/|H|.
            let ambient = g.explicit(ENUMERATION_LIMIT)?;
            let order = g.order();
            let mut total = BigUint::zero();
            for h in ambient.subgroups() {
                let t = h.p_type(p)?;
                let annihilator = &order / t.order();
                total += generating_tuples(&t, n) * annihilator.pow(n as u32);
            }
            Ok(total)
        }
        Flavor::U2B2 | Flavor::U3B3 => {
            let mut total = BigUint::zero();
            for w in isotropic_subgroups(spec)? {
                total += generating_tuples(&w.p_type(p)?, n);
            }
            Ok(total)
        }
        Flavor::U4B4 => {
            if n == 0 {
                return Ok(BigUint::one());
            }
            let symmetric = PairingSpec::new(Flavor::U2B2, g, spec.level())?;
            let mut total = BigUint::zero();
            for w in isotropic_subgroups(&symmetric)? {
                total += generating_tuples(&w.p_type(p)?, n - 1);
            }
            Ok(total * g.order().pow(2))
        }
    }
}

/// For graphs: `⟨x_1 − x_n, …, x_{n−1} − x_n⟩` is isotropic for the
/// symmetric pair `(U2, B2)`.
pub fn graph_coset_criterion(spec: &PairingSpec, tuple: &[usize]) -> Result<bool, OracleError> {
    let Some((&last, rest)) = tuple.split_last() else {
        return Ok(true);
    };
    let ambient = square(spec)?;
    let diffs: Vec<usize> = rest.iter().map(|&x| ambient.sub(x, last)).collect();
    let w = ambient.span(&diffs);
    let symmetric = PairingSpec::new(Flavor::U2B2, spec.group(), spec.level())?;
    Ok(is_trivial_tuple(&symmetric, w.elements()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsotropicFlavor {
    /// `B_Alt((g, h), (g', h')) = g·h' − g'·h`.
    Alternating,
    /// `B_Sym = g·h' + g'·h`, with `P(g, h) = g·h` also vanishing.
    SymmetricVanishing,
}

impl IsotropicFlavor {
    fn pairing(self) -> Flavor {
        match self {
            IsotropicFlavor::Alternating => Flavor::U3B3,
            IsotropicFlavor::SymmetricVanishing => Flavor::U2B2,
        }
    }
}

/// Maximal isotropic subgroups of `G²`, maximal meaning `|W| = |G|`.
#[derive(Clone, Debug)]
pub struct IsotropicCensus {
    pub ambient: FiniteAbelian,
    pub flavor: IsotropicFlavor,
    pub subgroups: Vec<SubgroupRecord>,
    pub max_count: usize,
}

pub fn isotropic_census(g: &PGroupType, flavor: IsotropicFlavor) -> Result<IsotropicCensus, OracleError> {
    let spec = PairingSpec::new(flavor.pairing(), g, g.log_exponent())?;
    let ambient = square(&spec)?;
    let target = spec.ambient().order();
    let subgroups: Vec<SubgroupRecord> = isotropic_subgroups(&spec)?
        .into_iter()
        .filter(|w| w.order() == target)
        .collect();
    Ok(IsotropicCensus {
        ambient,
        flavor,
        max_count: subgroups.len(),
        subgroups,
    })
}

/// `Σ_{H≤G} |Sym²H|` for the alternating census and `Σ_{H≤G} |∧²H|` for
/// the symmetric one.
pub fn isotropic_census_formula(g: &PGroupType, flavor: IsotropicFlavor) -> Result<BigUint, OracleError> {
    let ambient = g.explicit(ENUMERATION_LIMIT)?;
    let mut total = BigUint::zero();
    for h in ambient.subgroups() {
        let t = h.p_type(g.p())?;
        total += match flavor {
            IsotropicFlavor::Alternating => sym_square_order(&t),
            IsotropicFlavor::SymmetricVanishing => ext_square_order(&t),
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_tuple_examples() {
        let z2 = PGroupType::of(2, &[1]);
        let alt = PairingSpec::new(Flavor::U3B3, &z2, 1).unwrap();
        assert_eq!(trivial_part_count(&alt, 1).unwrap(), 4);
        let general = PairingSpec::new(Flavor::U1B1, &z2, 1).unwrap();
        assert_eq!(trivial_part_count(&general, 1).unwrap(), 3);
    }

    #[test]
    fn exhaustive_matches_census() {
        for parts in [&[1u32][..], &[2], &[1, 1]] {
            let g = PGroupType::of(2, parts);
            for flavor in Flavor::ALL {
                let spec = PairingSpec::new(flavor, &g, g.log_exponent()).unwrap();
                for n in 1..=2 {
                    assert_eq!(
                        BigUint::from(trivial_part_count(&spec, n).unwrap()),
                        trivial_part_census(&spec, n).unwrap(),
                        "{flavor:?} {parts:?} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn census_examples() {
        let z2 = PGroupType::of(2, &[1]);
        assert_eq!(isotropic_census(&z2, IsotropicFlavor::Alternating).unwrap().max_count, 3);
        assert_eq!(isotropic_census(&z2, IsotropicFlavor::SymmetricVanishing).unwrap().max_count, 2);
        let v4 = PGroupType::of(2, &[1, 1]);
        assert_eq!(isotropic_census(&v4, IsotropicFlavor::Alternating).unwrap().max_count, 15);
        assert_eq!(isotropic_census_formula(&v4, IsotropicFlavor::Alternating).unwrap(), BigUint::from(15u32));
    }
}
