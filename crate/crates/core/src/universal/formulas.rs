use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use super::product::{div, infinite, inv_power, truncated_product, LimitFormulaResult, ProductSpec, PRODUCT_TOLERANCE};
use super::UniversalError;
use crate::groups::{
    aut_order, ext_square_order, sp_order_formula, sym_square_order, symmetric_pairing_count, AbGroupType, PGroupType,
};

/// Symmetry class of the random matrix, with the size parity for the
/// alternating class, or the random-graph sandpile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitKind {
    #[serde(alias = "general")]
    NonSymmetric,
    Symmetric,
    AlternatingEven,
    AlternatingOdd,
    Graph,
}

impl LimitKind {
    pub const ALL: [LimitKind; 5] = [
        LimitKind::NonSymmetric,
        LimitKind::Symmetric,
        LimitKind::AlternatingEven,
        LimitKind::AlternatingOdd,
        LimitKind::Graph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitKind::NonSymmetric => "non-symmetric",
            LimitKind::Symmetric => "symmetric",
            LimitKind::AlternatingEven => "alternating-even",
            LimitKind::AlternatingOdd => "alternating-odd",
            LimitKind::Graph => "graph",
        }
    }
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LimitKind {
    type Err = UniversalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "general" | "non-symmetric" | "nonsymmetric" => Ok(LimitKind::NonSymmetric),
            "symmetric" => Ok(LimitKind::Symmetric),
            "alternating-even" | "alternating" => Ok(LimitKind::AlternatingEven),
            "alternating-odd" => Ok(LimitKind::AlternatingOdd),
            "graph" | "sandpile" => Ok(LimitKind::Graph),
            other => Err(UniversalError::UnknownKind(other.to_string())),
        }
    }
}

pub(crate) fn big_to_twofloat(x: &BigUint) -> TwoFloat {
    match x.to_u128() {
        Some(v) => TwoFloat::from(v),
        None => TwoFloat::from(x.to_f64().unwrap_or(f64::INFINITY)),
    }
}

/// `∏_{i≥1}(1 − p^{1−2i})`.
fn odd_product(p: u64, start: u32) -> Result<LimitFormulaResult, UniversalError> {
    infinite(p, 2, -1, start)
}

/// Limiting `P(cok ≅ H)` (`P(cok ≅ Z_p × H)` for odd alternating size).
pub fn cokernel_limit_prob(kind: LimitKind, h: &PGroupType) -> Result<LimitFormulaResult, UniversalError> {
    let p = h.p();
    let one = TwoFloat::from(1.0);
    match kind {
        LimitKind::NonSymmetric => {
            let c = div(one, big_to_twofloat(&aut_order(h)));
            Ok(infinite(p, 1, 0, 1)?.scale(c))
        }
        LimitKind::Symmetric | LimitKind::Graph => {
            let pairings = big_to_twofloat(&symmetric_pairing_count(h));
            let c = div(pairings, big_to_twofloat(&h.order()) * big_to_twofloat(&aut_order(h)));
            Ok(odd_product(p, 1)?.scale(c))
        }
        LimitKind::AlternatingEven | LimitKind::AlternatingOdd => {
            if !h.is_square() {
                return Ok(LimitFormulaResult::zero());
            }
            let sp = big_to_twofloat(&sp_order_formula(h)?);
            if kind == LimitKind::AlternatingEven {
                Ok(odd_product(p, 1)?.scale(div(big_to_twofloat(&h.order()), sp)))
            } else {
                Ok(odd_product(p, 2)?.scale(div(one, sp)))
            }
        }
    }
}

/// Limiting sandpile probability `P(S_p ≅ H)`.
pub fn sandpile_limit_prob(h: &PGroupType) -> Result<LimitFormulaResult, UniversalError> {
    cokernel_limit_prob(LimitKind::Graph, h)
}

fn finite_product(p: u64, step: u32, offset: i64, start: u32, end: u32) -> Result<LimitFormulaResult, UniversalError> {
    if end < start {
        return Ok(LimitFormulaResult::exact(TwoFloat::from(1.0)));
    }
    truncated_product(ProductSpec::finite(p, step, offset, start, end), PRODUCT_TOLERANCE)
}

/// Limiting probability that the `F_p`-rank has defect indexed by `k`.
///
/// For the non-symmetric, symmetric and graph kinds the corank is `k`.
/// For even alternating size `2n` the event is rank `2n − 2k`; for odd
/// size `2n + 1` it is rank `2n − 2k`, i.e. corank `2k + 1`.
pub fn rank_limit_prob(kind: LimitKind, p: u64, k: u32) -> Result<LimitFormulaResult, UniversalError> {
    if !crate::groups::is_prime(p) {
        return Err(UniversalError::Group(crate::groups::GroupError::NotPrime(p)));
    }
    let kk = u64::from(k);
    match kind {
        LimitKind::NonSymmetric => {
            let den = finite_product(p, 1, 0, 1, k)?;
            let den = den.times(den);
            Ok(infinite(p, 1, 0, 1)?.divide(den).scale(inv_power(p, kk * kk)))
        }
        LimitKind::Symmetric | LimitKind::Graph => {
            let num = infinite(p, 1, 0, k + 1)?;
            let den = infinite(p, 2, 0, 1)?;
            Ok(num.divide(den).scale(inv_power(p, kk * (kk + 1) / 2)))
        }
        LimitKind::AlternatingEven => {
            let num = infinite(p, 2, 1, k)?;
            let den = finite_product(p, 2, 0, 1, k)?;
            Ok(num.divide(den).scale(inv_power(p, kk * (2 * kk).saturating_sub(1))))
        }
        LimitKind::AlternatingOdd => {
            let num = infinite(p, 2, 1, k + 1)?;
            let den = finite_product(p, 2, 0, 1, k)?;
            Ok(num.divide(den).scale(inv_power(p, kk * (2 * kk + 1))))
        }
    }
}

/// `lim E #Sur(cok, G)`: 1, `|∧²G|` or `|Sym²G|`; `|∧²G|` for graphs.
pub fn moment_limit(kind: LimitKind, g: &PGroupType) -> BigUint {
    match kind {
        LimitKind::NonSymmetric => BigUint::from(1u32),
        LimitKind::Symmetric | LimitKind::Graph => ext_square_order(g),
        LimitKind::AlternatingEven | LimitKind::AlternatingOdd => sym_square_order(g),
    }
}

/// Joint limit over a finite prime set: the product of the per-prime
/// limits of the Sylow components.
pub fn multi_prime_limit_prob(
    kind: LimitKind,
    h: &AbGroupType,
    primes: &BTreeSet<u64>,
) -> Result<LimitFormulaResult, UniversalError> {
    if let Some(q) = h.primes().find(|q| !primes.contains(q)) {
        return Err(UniversalError::MissingPrime(q));
    }
    let mut out = LimitFormulaResult::exact(TwoFloat::from(1.0));
    for &p in primes {
        let hp = h.sylow(p)?;
        out = out.times(cokernel_limit_prob(kind, &hp)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(r: LimitFormulaResult, x: f64, tol: f64) {
        assert!((r.value_f64() - x).abs() < tol, "{} vs {x}", r.value_f64());
        assert!(r.tail_bound < 1e-12);
    }

    #[test]
    fn cokernel_examples() {
        close(cokernel_limit_prob(LimitKind::NonSymmetric, &PGroupType::of(2, &[])).unwrap(), 0.288788, 1e-6);
        assert_eq!(cokernel_limit_prob(LimitKind::AlternatingEven, &PGroupType::of(3, &[1])).unwrap().value_f64(), 0.0);
        close(cokernel_limit_prob(LimitKind::Symmetric, &PGroupType::of(2, &[])).unwrap(), 0.419422, 1e-6);
        close(sandpile_limit_prob(&PGroupType::of(2, &[])).unwrap(), 0.419422, 1e-6);
        close(sandpile_limit_prob(&PGroupType::of(2, &[1])).unwrap(), 0.209711, 1e-6);
        close(sandpile_limit_prob(&PGroupType::of(2, &[1, 1])).unwrap(), 0.069904, 1e-6);
    }

    #[test]
    fn rank_examples() {
        close(rank_limit_prob(LimitKind::NonSymmetric, 2, 0).unwrap(), 0.288788, 1e-6);
        close(rank_limit_prob(LimitKind::Symmetric, 2, 0).unwrap(), 0.419422, 1e-6);
        let total: f64 = (0..=10).map(|k| rank_limit_prob(LimitKind::NonSymmetric, 2, k).unwrap().value_f64()).sum();
        assert!((total - 1.0).abs() < 1e-6);
    }

    #[test]
    fn corank_zero_matches_trivial_cokernel() {
        for p in [2u64, 3, 5] {
            let trivial = PGroupType::of(p, &[]);
            for kind in LimitKind::ALL {
                let a = rank_limit_prob(kind, p, 0).unwrap();
                let b = cokernel_limit_prob(kind, &trivial).unwrap();
                assert!((a.value_f64() - b.value_f64()).abs() < 1e-12, "{kind} p={p}");
            }
        }
    }

    #[test]
    fn rank_distributions_are_proper() {
        for p in [2u64, 3, 7] {
            for kind in LimitKind::ALL {
                let total: f64 = (0..=12).map(|k| rank_limit_prob(kind, p, k).unwrap().value_f64()).sum();
                assert!((total - 1.0).abs() < 1e-10, "{kind} p={p}: {total}");
            }
        }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moment_limit(LimitKind::NonSymmetric, &PGroupType::of(3, &[2, 1])), BigUint::from(1u32));
        assert_eq!(moment_limit(LimitKind::Symmetric, &PGroupType::of(2, &[1, 1])), BigUint::from(2u32));
        assert_eq!(moment_limit(LimitKind::AlternatingEven, &PGroupType::of(2, &[1])), BigUint::from(2u32));
        assert_eq!(moment_limit(LimitKind::Graph, &PGroupType::of(2, &[1, 1])), BigUint::from(2u32));
    }

    #[test]
    fn multi_prime_examples() {
        let primes: BTreeSet<u64> = [2, 3].into();
        let trivial = AbGroupType::trivial();
        close(multi_prime_limit_prob(LimitKind::NonSymmetric, &trivial, &primes).unwrap(), 0.161757, 1e-6);
        let z6 = AbGroupType::from_p_groups([PGroupType::of(2, &[1]), PGroupType::of(3, &[1])]).unwrap();
        let expected = 0.288_788_095_086_602_4 * 0.560_126_077_927_948_9 / 2.0;
        close(multi_prime_limit_prob(LimitKind::NonSymmetric, &z6, &primes).unwrap(), expected, 1e-12);
        assert!(matches!(
            multi_prime_limit_prob(LimitKind::NonSymmetric, &z6, &[2].into()),
            Err(UniversalError::MissingPrime(3))
        ));
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in LimitKind::ALL {
            assert_eq!(kind.name().parse::<LimitKind>().unwrap(), kind);
            assert_eq!(serde_json::to_string(&kind).unwrap(), format!("\"{}\"", kind.name()));
        }
        assert_eq!("general".parse::<LimitKind>().unwrap(), LimitKind::NonSymmetric);
    }
}
