//! Bilinear pairings on finite abelian p-groups, realized with values in
//! `(1/p^L)Z/Z ≅ Z/p^L`.
//!
//! A pairing on `⊕ Z/p^{e_i}` is stored as a Gram matrix over `Z/p^L`
//! (`L = max e_i`) whose `(i, j)` entry is divisible by `p^{L − min(e_i, e_j)}`,
//! which is exactly the condition for `Σ x_i y_j M_ij` to be well defined.

use super::{GroupError, PGroupType, ENUMERATION_LIMIT};

/// Gram-matrix candidates we are willing to scan in a brute-force count.
pub const GRAM_SCAN_LIMIT: u64 = 1 << 20;

/// Search-tree nodes we are willing to visit when counting isometries.
pub const ISOMETRY_NODE_LIMIT: u64 = 50_000_000;

/// The standard nondegenerate pairing `x · y = Σ p^{d − e_i} x_i y_i mod p^d`
/// on `⊕ Z/p^{e_i}`, defined whenever `d ≥ max e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotPairing {
    modulus: u64,
    weights: Vec<u64>,
}

impl DotPairing {
    pub fn new(g: &PGroupType, level: u32) -> Result<Self, GroupError> {
        Self::on_factors(g.p(), g.lambda().parts(), level)
    }

    pub fn on_factors(p: u64, exps: &[u32], level: u32) -> Result<Self, GroupError> {
        if exps.iter().any(|&e| e > level) {
            return Err(GroupError::LevelTooLow { level });
        }
        let modulus = p.checked_pow(level).ok_or(GroupError::GroupTooLarge { limit: u64::MAX })?;
        let weights = exps.iter().map(|&e| p.pow(level - e)).collect();
        Ok(DotPairing { modulus, weights })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn eval(&self, x: &[u64], y: &[u64]) -> u64 {
        let m = self.modulus;
        self.weights
            .iter()
            .zip(x.iter().zip(y))
            .fold(0u64, |acc, (&w, (&a, &b))| (acc + w % m * (a % m) % m * (b % m)) % m)
    }
}

struct FactorSystem {
    p: u64,
    exps: Vec<u32>,
    level: u32,
    modulus: u64,
}

impl FactorSystem {
    fn new(p: u64, exps: &[u32]) -> Result<Self, GroupError> {
        let mut order: u64 = 1;
        for &e in exps {
            order = p
                .checked_pow(e)
                .and_then(|q| order.checked_mul(q))
                .filter(|&o| o <= ENUMERATION_LIMIT)
                .ok_or(GroupError::GroupTooLarge {
                    limit: ENUMERATION_LIMIT,
                })?;
        }
        let level = exps.iter().copied().max().unwrap_or(0);
        Ok(FactorSystem {
            p,
            exps: exps.to_vec(),
            level,
            modulus: p.pow(level),
        })
    }

    fn rank(&self) -> usize {
        self.exps.len()
    }

    /// Nonzero elements of order `p`, as coordinate vectors.
    fn socle(&self) -> Vec<Vec<u64>> {
        let r = self.rank();
        let total = self.p.pow(r as u32);
        (1..total)
            .map(|mut code| {
                (0..r)
                    .map(|i| {
                        let digit = code % self.p;
                        code /= self.p;
                        digit * self.p.pow(self.exps[i] - 1)
                    })
                    .collect()
            })
            .collect()
    }

    /// Elements of `H[p^k]`.
    fn torsion(&self, k: u32) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &e in &self.exps {
            let step = self.p.pow(e.saturating_sub(k));
            let q = self.p.pow(e);
            let choices: Vec<u64> = (0..q).step_by(step as usize).collect();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |&c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out
    }

    fn form(&self, gram: &[Vec<u64>], x: &[u64], y: &[u64]) -> u64 {
        let m = self.modulus;
        let mut acc = 0u64;
        for (i, row) in gram.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            for (j, &g) in row.iter().enumerate() {
                acc = (acc + x[i] % m * (y[j] % m) % m * g) % m;
            }
        }
        acc
    }

    fn is_well_defined(&self, gram: &[Vec<u64>]) -> bool {
        let r = self.rank();
        gram.len() == r
            && gram.iter().enumerate().all(|(i, row)| {
                row.len() == r
                    && row.iter().enumerate().all(|(j, &g)| {
                        let need = self.p.pow(self.level - self.exps[i].min(self.exps[j]));
                        g < self.modulus && g % need == 0
                    })
            })
    }

    /// Injectivity of `x ↦ (y ↦ form(x, y))`; the kernel is a subgroup, so it
    /// suffices to test elements of order `p`.
    fn is_perfect(&self, gram: &[Vec<u64>], socle: &[Vec<u64>]) -> bool {
        let r = self.rank();
        socle.iter().all(|x| {
            (0..r).any(|j| {
                let m = self.modulus;
                let v = (0..r).fold(0u64, |acc, i| (acc + x[i] % m * gram[i][j]) % m);
                v != 0
            })
        })
    }
}

/// Number of symmetric bilinear perfect pairings `H × H → Q/Z`, by scanning
/// every admissible symmetric Gram matrix.
pub fn count_symmetric_perfect_pairings(h: &PGroupType) -> Result<u64, GroupError> {
    count_symmetric_perfect_on_factors(h.p(), h.lambda().parts())
}

/// Same count for an arbitrary ordering of the cyclic factors.
pub fn count_symmetric_perfect_on_factors(p: u64, exps: &[u32]) -> Result<u64, GroupError> {
    let sys = FactorSystem::new(p, exps)?;
    let r = sys.rank();
    if r == 0 {
        return Ok(1);
    }
    let mut slots = Vec::new();
    let mut candidates: u64 = 1;
    for i in 0..r {
        for j in i..r {
            let width = exps[i].min(exps[j]);
            let step = p.pow(sys.level - width);
            let count = p.pow(width);
            candidates = candidates
                .checked_mul(count)
                .filter(|&c| c <= GRAM_SCAN_LIMIT)
                .ok_or(GroupError::GroupTooLarge {
                    limit: ENUMERATION_LIMIT,
                })?;
            slots.push((i, j, step, count));
        }
    }
    let socle = sys.socle();
    let mut gram = vec![vec![0u64; r]; r];
    let mut digits = vec![0u64; slots.len()];
    let mut perfect = 0u64;
    loop {
        for (slot, &(i, j, step, _)) in slots.iter().enumerate() {
            gram[i][j] = digits[slot] * step;
            gram[j][i] = gram[i][j];
        }
        if sys.is_perfect(&gram, &socle) {
            perfect += 1;
        }
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                return Ok(perfect);
            }
            digits[pos] += 1;
            if digits[pos] < slots[pos].3 {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// The hyperbolic alternating form on `K × K`:
/// `ω((a, b), (a', b')) = a · b' − a' · b`.
///
/// Returned as a Gram matrix on the factor list `exps(K) ++ exps(K)`.
pub fn hyperbolic_gram(k: &PGroupType) -> (Vec<u32>, Vec<Vec<u64>>) {
    let half = k.lambda().parts();
    let r = half.len();
    let level = k.log_exponent();
    let m = k.p().pow(level);
    let mut exps = half.to_vec();
    exps.extend_from_slice(half);
    let mut gram = vec![vec![0u64; 2 * r]; 2 * r];
    for (i, &e) in half.iter().enumerate() {
        let w = k.p().pow(level - e) % m;
        gram[i][r + i] = w;
        gram[r + i][i] = (m - w) % m;
    }
    (exps, gram)
}

/// `|Sp(H)|`: automorphisms of `H ≅ K × K` preserving the hyperbolic form.
pub fn sp_order(h: &PGroupType) -> Result<u64, GroupError> {
    let k = h.square_root().ok_or(GroupError::NotInSp)?;
    if h.order_u64().map_or(true, |o| o > ENUMERATION_LIMIT) {
        return Err(GroupError::GroupTooLarge {
            limit: ENUMERATION_LIMIT,
        });
    }
    let (exps, gram) = hyperbolic_gram(&k);
    count_isometries(h.p(), &exps, &gram)
}

/// Number of endomorphisms of `⊕ Z/p^{exps_i}` preserving the pairing with
/// Gram matrix `gram`. The form must be perfect, which makes every such
/// endomorphism injective and hence an automorphism.
pub fn count_isometries(p: u64, exps: &[u32], gram: &[Vec<u64>]) -> Result<u64, GroupError> {
    let sys = FactorSystem::new(p, exps)?;
    if !sys.is_well_defined(gram) {
        return Err(GroupError::InvalidForm("Gram matrix is not well defined on the group"));
    }
    if !sys.is_perfect(gram, &sys.socle()) {
        return Err(GroupError::InvalidForm("form is not perfect"));
    }
    let r = sys.rank();
    let candidates: Vec<Vec<Vec<u64>>> = exps.iter().map(|&e| sys.torsion(e)).collect();
    let mut chosen: Vec<&[u64]> = Vec::with_capacity(r);
    let mut nodes = 0u64;
    let count = extend_isometry(&sys, gram, &candidates, &mut chosen, &mut nodes)?;
    Ok(count)
}

fn extend_isometry<'a>(
    sys: &FactorSystem,
    gram: &[Vec<u64>],
    candidates: &'a [Vec<Vec<u64>>],
    chosen: &mut Vec<&'a [u64]>,
    nodes: &mut u64,
) -> Result<u64, GroupError> {
    let i = chosen.len();
    if i == candidates.len() {
        return Ok(1);
    }
    let mut total = 0;
    for y in &candidates[i] {
        *nodes += 1;
        if *nodes > ISOMETRY_NODE_LIMIT {
            return Err(GroupError::GroupTooLarge {
                limit: ENUMERATION_LIMIT,
            });
        }
        let compatible = sys.form(gram, y, y) == gram[i][i]
            && chosen.iter().enumerate().all(|(j, x)| {
                sys.form(gram, x, y) == gram[j][i] && sys.form(gram, y, x) == gram[i][j]
            });
        if compatible {
            chosen.push(y);
            total += extend_isometry(sys, gram, candidates, chosen, nodes)?;
            chosen.pop();
        }
    }
    Ok(total)
}
