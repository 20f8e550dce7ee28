use num_bigint::BigUint;
use num_traits::One;

use super::{GroupError, Partition, PGroupType};

pub fn conjugate(lambda: &Partition) -> Partition {
    lambda.conjugate()
}

fn p_pow(p: u64, e: u64) -> BigUint {
    BigUint::from(p).pow(e as u32)
}

/// `|∧²G| = p^{Σ_j λ'_j(λ'_j−1)/2}`.
pub fn ext_square_order(g: &PGroupType) -> BigUint {
    let e: u64 = g
        .lambda()
        .conjugate()
        .parts()
        .iter()
        .map(|&c| u64::from(c) * u64::from(c).saturating_sub(1) / 2)
        .sum();
    p_pow(g.p(), e)
}

/// `|Sym²G| = p^{Σ_j λ'_j(λ'_j+1)/2}`.
pub fn sym_square_order(g: &PGroupType) -> BigUint {
    let e: u64 = g
        .lambda()
        .conjugate()
        .parts()
        .iter()
        .map(|&c| u64::from(c) * (u64::from(c) + 1) / 2)
        .sum();
    p_pow(g.p(), e)
}

/// `|G ⊗ G| = p^{Σ_j (λ'_j)²}`.
pub fn tensor_square_order(g: &PGroupType) -> BigUint {
    let e: u64 = g
        .lambda()
        .conjugate()
        .parts()
        .iter()
        .map(|&c| u64::from(c) * u64::from(c))
        .sum();
    p_pow(g.p(), e)
}

/// `|Aut(G)|` for `G = ⊕ Z/p^{e_k}` with exponents sorted increasingly
/// `e₁ ≤ ⋯ ≤ e_n`. With `d_k = max{l : e_l = e_k}` and
/// `c_k = min{l : e_l = e_k}`,
///
/// ```text
/// |Aut G| = ∏_k (p^{d_k} − p^{k−1}) · ∏_j p^{e_j (n − d_j)} · ∏_i p^{(e_i − 1)(n − c_i + 1)}
/// ```
pub fn aut_order(g: &PGroupType) -> BigUint {
    let p = g.p();
    let mut e: Vec<u64> = g.lambda().parts().iter().map(|&x| u64::from(x)).collect();
    e.reverse();
    let n = e.len() as u64;
    let mut total = BigUint::one();
    for k in 0..e.len() {
        // 1-based d_k and c_k.
        let d = (0..e.len()).rev().find(|&l| e[l] == e[k]).unwrap() as u64 + 1;
        let c = (0..e.len()).find(|&l| e[l] == e[k]).unwrap() as u64 + 1;
        total *= p_pow(p, d) - p_pow(p, k as u64);
        total *= p_pow(p, e[k] * (n - d));
        total *= p_pow(p, (e[k] - 1) * (n - c + 1));
    }
    total
}

/// Invertible `m × m` symmetric (or alternating) matrices over `F_p`:
/// `p^{e} ∏_{i=1}^{c} (p^{2i−1} − 1)` with `c = ⌈m/2⌉` (resp. `m/2`).
fn invertible_forms(p: u64, m: u64, alternating: bool) -> BigUint {
    if alternating && m % 2 == 1 {
        return BigUint::from(0u32);
    }
    let c = m.div_ceil(2);
    let free = if alternating { m * m.saturating_sub(1) / 2 } else { m * (m + 1) / 2 };
    let mut out = p_pow(p, free - c * c);
    for i in 1..=c {
        out *= p_pow(p, 2 * i - 1) - BigUint::one();
    }
    out
}

/// Perfect pairings on `H = ⊕_j (Z/p^j)^{m_j}`. A Gram matrix is perfect
/// exactly when each diagonal block of the generators of order `p^j` is
/// invertible mod `p`; the remaining entries are free.
fn pairing_count(h: &PGroupType, alternating: bool) -> BigUint {
    let p = h.p();
    let blocks: Vec<(u64, u64)> = h.lambda().multiplicities().into_iter().map(|(j, m)| (u64::from(j), m as u64)).collect();
    let mut out = BigUint::one();
    for (a, &(j, m)) in blocks.iter().enumerate() {
        let diag = if alternating { m * m.saturating_sub(1) / 2 } else { m * (m + 1) / 2 };
        out *= invertible_forms(p, m, alternating) * p_pow(p, (j - 1) * diag);
        for &(j2, m2) in &blocks[a + 1..] {
            out *= p_pow(p, j.min(j2) * m * m2);
        }
    }
    out
}

/// Number of symmetric perfect pairings `H × H → Q/Z`, in closed form.
pub fn symmetric_pairing_count(h: &PGroupType) -> BigUint {
    pairing_count(h, false)
}

/// Number of alternating perfect pairings on `H`; zero unless `H ≅ K × K`.
pub fn alternating_pairing_count(h: &PGroupType) -> BigUint {
    pairing_count(h, true)
}

/// `|Sp(H)| = |Aut H| / #{alternating perfect pairings}`, since `Aut H` acts
/// transitively on them.
pub fn sp_order_formula(h: &PGroupType) -> Result<BigUint, GroupError> {
    if !h.is_square() {
        return Err(GroupError::NotInSp);
    }
    Ok(aut_order(h) / alternating_pairing_count(h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn square_order_examples() {
        assert_eq!(ext_square_order(&PGroupType::of(3, &[1])), big(1));
        assert_eq!(ext_square_order(&PGroupType::of(2, &[1, 1])), big(2));
        assert_eq!(ext_square_order(&PGroupType::of(2, &[2, 1])), big(2));
        assert_eq!(sym_square_order(&PGroupType::of(2, &[])), big(1));
        assert_eq!(sym_square_order(&PGroupType::of(2, &[1])), big(2));
        assert_eq!(sym_square_order(&PGroupType::of(3, &[1, 1])), big(27));
    }

    #[test]
    fn aut_order_examples() {
        assert_eq!(aut_order(&PGroupType::of(5, &[1])), big(4));
        assert_eq!(aut_order(&PGroupType::of(2, &[1, 1])), big(6));
        assert_eq!(aut_order(&PGroupType::of(2, &[2, 1])), big(8));
        assert_eq!(aut_order(&PGroupType::of(2, &[])), big(1));
        // |GL_3(F_2)| and |Aut(Z/p^k)| = p^{k-1}(p-1).
        assert_eq!(aut_order(&PGroupType::of(2, &[1, 1, 1])), big(168));
        assert_eq!(aut_order(&PGroupType::of(3, &[3])), big(18));
    }

    #[test]
    fn pairing_closed_forms_match_enumeration() {
        for (p, max_log) in [(2u64, 5u32), (3, 3), (5, 2)] {
            for h in PGroupType::all_up_to(p, max_log).unwrap() {
                let brute = super::super::count_symmetric_perfect_pairings(&h).unwrap();
                assert_eq!(symmetric_pairing_count(&h), big(brute), "{h}");
                match super::super::sp_order(&h) {
                    Ok(sp) => assert_eq!(sp_order_formula(&h).unwrap(), big(sp), "{h}"),
                    Err(GroupError::NotInSp) => {
                        assert!(sp_order_formula(&h).is_err());
                        assert_eq!(alternating_pairing_count(&h), big(0));
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert_eq!(sp_order_formula(&PGroupType::of(2, &[1, 1, 1, 1])).unwrap(), big(720));
    }

    #[test]
    fn ext_times_sym_is_tensor() {
        for g in PGroupType::all_up_to(3, 6).unwrap() {
            assert_eq!(ext_square_order(&g) * sym_square_order(&g), tensor_square_order(&g));
        }
    }
}
