use rustc_hash::FxHashMap;

use num_bigint::BigUint;

use super::{check_budget, OracleError};
use crate::groups::{FiniteAbelian, PGroupType, ENUMERATION_LIMIT};
use crate::linalg::elementary_exponents;

/// Elements `y` of `G` with `p^k y = 0`.
fn torsion(g: &FiniteAbelian, p: u64, k: u32) -> Vec<usize> {
    let pk = p.pow(k);
    (0..g.order()).filter(|&y| g.scale(pk, y) == 0).collect()
}

/// Subspaces of `F_p^r` in reduced row echelon form. Vectors are base-`p`
/// codes with digit `j` the `j`-th coordinate; a subspace is keyed by its
/// sorted nonzero rows packed into a `u128`.
struct Frattini {
    p: u64,
    r: usize,
    bits: u32,
}

const MAX_ROWS: usize = 16;

impl Frattini {
    fn new(p: u64, r: usize) -> Option<Self> {
        let size = p.checked_pow(r as u32)?;
        let bits = 64 - size.leading_zeros();
        (r <= MAX_ROWS && bits as usize * r <= 128).then_some(Frattini { p, r, bits })
    }

    fn unpack(&self, key: u128, rows: &mut [u32; MAX_ROWS]) -> usize {
        let mask = (1u128 << self.bits) - 1;
        let mut k = key;
        let mut n = 0;
        while k != 0 {
            rows[n] = (k & mask) as u32;
            k >>= self.bits;
            n += 1;
        }
        n
    }

    fn pack(&self, rows: &mut [u32]) -> u128 {
        rows.sort_unstable();
        rows.iter().rev().fold(0u128, |acc, &r| acc << self.bits | u128::from(r))
    }

    fn digits(&self, mut v: u32) -> [u64; MAX_ROWS] {
        let mut out = [0u64; MAX_ROWS];
        for d in out.iter_mut().take(self.r) {
            *d = u64::from(v) % self.p;
            v /= self.p as u32;
        }
        out
    }

    fn code(&self, digits: &[u64]) -> u32 {
        digits[..self.r].iter().rev().fold(0u32, |acc, &d| acc * self.p as u32 + d as u32)
    }

    /// The span of the subspace and `v`, if it is larger.
    fn extend(&self, key: u128, v: u32) -> Option<u128> {
        let mut rows = [0u32; MAX_ROWS];
        let n = self.unpack(key, &mut rows);
        if self.p == 2 {
            let mut v = v;
            for &b in &rows[..n] {
                let top = 31 - b.leading_zeros();
                if v >> top & 1 == 1 {
                    v ^= b;
                }
            }
            if v == 0 {
                return None;
            }
            let top = 31 - v.leading_zeros();
            for b in rows[..n].iter_mut() {
                if *b >> top & 1 == 1 {
                    *b ^= v;
                }
            }
            rows[n] = v;
            return Some(self.pack(&mut rows[..=n]));
        }
        let p = self.p;
        let pivot = |w: &[u64]| w[..self.r].iter().rposition(|&x| x != 0);
        let mut w = self.digits(v);
        for &b in &rows[..n] {
            let row = self.digits(b);
            let f = w[pivot(&row).expect("basis rows are nonzero")];
            if f != 0 {
                for (a, &c) in w.iter_mut().zip(&row) {
                    *a = (*a + (p - f) * c) % p;
                }
            }
        }
        let t = pivot(&w)?;
        let inv = (1..p).find(|&i| i * w[t] % p == 1).expect("p is prime");
        for a in w.iter_mut() {
            *a = *a * inv % p;
        }
        for b in rows[..n].iter_mut() {
            let mut row = self.digits(*b);
            let f = row[t];
            if f != 0 {
                for (a, &c) in row.iter_mut().zip(&w) {
                    *a = (*a + (p - f) * c) % p;
                }
                *b = self.code(&row);
            }
        }
        rows[n] = self.code(&w);
        Some(self.pack(&mut rows[..=n]))
    }
}

/// `|Aut G|` by counting generator images: an endomorphism sends `e_i`
/// anywhere in `G[p^{λ_i}]` and is bijective exactly when the images span
/// `G/pG`. Images are enumerated explicitly and grouped by their class in
/// `G/pG`; the spanning condition is tracked over explicit subspaces.
pub fn exhaustive_aut_order(g: &PGroupType) -> Result<BigUint, OracleError> {
    let ambient = g.explicit(ENUMERATION_LIMIT)?;
    let p = g.p();
    let overflow = OracleError::TooLargeToEnumerate {
        count: u128::MAX,
        limit: super::ENUMERATION_BUDGET,
    };
    let frattini = Frattini::new(p, g.rank()).ok_or_else(|| overflow.clone())?;
    let mut states: FxHashMap<u128, u128> = FxHashMap::default();
    states.insert(0, 1);
    for &lambda in g.lambda().parts() {
        let mut classes: FxHashMap<u32, u64> = FxHashMap::default();
        for y in torsion(&ambient, p, lambda) {
            let reduced: Vec<u64> = ambient.decode(y).iter().map(|&x| x % p).collect();
            *classes.entry(frattini.code(&reduced)).or_default() += 1;
        }
        let mut next: FxHashMap<u128, u128> = FxHashMap::default();
        next.reserve(states.len() * 4);
        for (&basis, &count) in &states {
            for (&v, &lifts) in &classes {
                if let Some(bigger) = frattini.extend(basis, v) {
                    let add = count.checked_mul(u128::from(lifts)).ok_or_else(|| overflow.clone())?;
                    let slot = next.entry(bigger).or_default();
                    *slot = slot.checked_add(add).ok_or_else(|| overflow.clone())?;
                }
            }
        }
        states = next;
    }
    let total = states.into_values().try_fold(0u128, |acc, c| acc.checked_add(c)).ok_or(overflow)?;
    Ok(BigUint::from(total))
}

/// `|Aut G|` by listing every endomorphism and keeping the surjective ones.
pub fn count_automorphisms_by_images(g: &PGroupType) -> Result<u64, OracleError> {
    let ambient = g.explicit(ENUMERATION_LIMIT)?;
    let images: Vec<Vec<usize>> = g.lambda().parts().iter().map(|&l| torsion(&ambient, g.p(), l)).collect();
    count_spanning(&ambient, &images, ambient.order())
}

fn count_spanning(target: &FiniteAbelian, images: &[Vec<usize>], order: usize) -> Result<u64, OracleError> {
    let total = images.iter().fold(1u128, |acc, v| acc.saturating_mul(v.len() as u128));
    check_budget(total.saturating_mul(order as u128))?;
    let mut count = 0;
    let mut digits = vec![0usize; images.len()];
    let mut chosen = vec![0usize; images.len()];
    loop {
        for (k, &d) in digits.iter().enumerate() {
            chosen[k] = images[k][d];
        }
        if target.span(&chosen).order() == order {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(count);
            }
            digits[k] += 1;
            if digits[k] < images[k].len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// `#Sur(X, G)` by listing all homomorphisms `X → G`.
pub fn count_surjections(x: &PGroupType, g: &PGroupType) -> Result<u64, OracleError> {
    if x.p() != g.p() {
        return Err(crate::groups::GroupError::PrimeMismatch(x.p(), g.p()).into());
    }
    let target = g.explicit(ENUMERATION_LIMIT)?;
    let images: Vec<Vec<usize>> = x.lambda().parts().iter().map(|&l| torsion(&target, g.p(), l)).collect();
    count_spanning(&target, &images, target.order())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSquareOrders {
    pub tensor: BigUint,
    pub exterior: BigUint,
    pub symmetric: BigUint,
}

/// `|G⊗G|`, `|∧²G|` and `|Sym²G|` from explicit presentations of
/// `G⊗G = ⊕ Z/p^{min(λ_i, λ_j)} e_i⊗e_j` and its quotients by all
/// `x⊗x` and by all `x⊗e_j − e_j⊗x`, via Smith forms.
pub fn tensor_square_orders(g: &PGroupType) -> Result<TensorSquareOrders, OracleError> {
    let ambient = g.explicit(ENUMERATION_LIMIT)?;
    let p = g.p();
    let parts = g.lambda().parts();
    let r = parts.len();
    let level = g.log_exponent() + 1;
    let m = p.pow(level);
    let rows = r * r;
    let mut relations: Vec<Vec<u64>> = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let mut col = vec![0u64; rows];
            col[i * r + j] = p.pow(parts[i].min(parts[j]));
            relations.push(col);
        }
    }
    let elements: Vec<Vec<u64>> = (0..ambient.order()).map(|x| ambient.decode(x)).collect();
    let squares: Vec<Vec<u64>> = elements
        .iter()
        .map(|x| {
            let mut col = vec![0u64; rows];
            for i in 0..r {
                for j in 0..r {
                    col[i * r + j] = x[i] * x[j] % m;
                }
            }
            col
        })
        .collect();
    let mut commutators = Vec::new();
    for x in &elements {
        for j in 0..r {
            let mut col = vec![0u64; rows];
            for i in 0..r {
                col[i * r + j] = (col[i * r + j] + x[i]) % m;
                col[j * r + i] = (col[j * r + i] + m - x[i] % m) % m;
            }
            commutators.push(col);
        }
    }
    let order = |extra: &[Vec<u64>]| -> Result<BigUint, OracleError> {
        let cols: Vec<&Vec<u64>> = relations.iter().chain(extra).collect();
        check_budget((rows * cols.len()) as u128)?;
        let mut data = vec![0u64; rows * cols.len()];
        for (c, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                data[i * cols.len() + c] = v;
            }
        }
        let exps = if rows == 0 { Vec::new() } else { elementary_exponents(data, rows, cols.len(), p, level) };
        Ok(BigUint::from(p).pow(exps.iter().sum::<u32>()))
    };
    Ok(TensorSquareOrders {
        tensor: order(&[])?,
        exterior: order(&squares)?,
        symmetric: order(&commutators)?,
    })
}
