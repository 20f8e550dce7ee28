//! Explicit finite abelian groups `Z/q₁ × ⋯ × Z/q_r` with elements encoded as
//! mixed-radix indices, and their subgroup lattices.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::{GroupError, Partition, PGroupType};

/// Hard cap on the order of any group we enumerate elementwise.
pub const ENUMERATION_LIMIT: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteAbelian {
    moduli: Vec<u64>,
    #[serde(skip)]
    strides: Vec<usize>,
    #[serde(skip)]
    order: usize,
}

impl FiniteAbelian {
    pub fn new(moduli: Vec<u64>, limit: u64) -> Result<Self, GroupError> {
        let mut order: u64 = 1;
        for &q in &moduli {
            if q < 2 {
                return Err(GroupError::InvalidModulus(q));
            }
            order = order
                .checked_mul(q)
                .filter(|&o| o <= limit)
                .ok_or(GroupError::GroupTooLarge { limit })?;
        }
        let mut strides = vec![1usize; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1] as usize;
        }
        Ok(FiniteAbelian {
            moduli,
            strides,
            order: order as usize,
        })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn decode(&self, idx: usize) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(&self.strides)
            .map(|(&q, &s)| ((idx / s) as u64) % q)
            .collect()
    }

    pub fn encode(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.moduli)
            .zip(&self.strides)
            .map(|((&x, &q), &s)| (x % q) as usize * s)
            .sum()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&q, &s) in self.moduli.iter().zip(&self.strides) {
            let q = q as usize;
            let x = (a / s) % q;
            let y = (b / s) % q;
            out += ((x + y) % q) * s;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut out = 0;
        for (&q, &s) in self.moduli.iter().zip(&self.strides) {
            let q = q as usize;
            let x = (a / s) % q;
            out += ((q - x) % q) * s;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn scale(&self, k: u64, a: usize) -> usize {
        let mut out = 0;
        for (&q, &s) in self.moduli.iter().zip(&self.strides) {
            let x = ((a / s) as u64) % q;
            out += ((x * (k % q)) % q) as usize * s;
        }
        out
    }

    /// Order of the element `a`.
    pub fn element_order(&self, a: usize) -> u64 {
        let mut ord = 1u64;
        let mut cur = a;
        while cur != 0 {
            cur = self.add(cur, a);
            ord += 1;
        }
        ord
    }

    pub fn cyclic(&self, a: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut cur = a;
        while cur != 0 {
            out.push(cur);
            cur = self.add(cur, a);
        }
        out
    }

    /// Subgroup generated by `gens`.
    pub fn span(&self, gens: &[usize]) -> SubgroupRecord {
        let mut set = ElementSet::new(self.order);
        set.insert(0);
        let mut elems = vec![0usize];
        for &g in gens {
            if set.contains(g) {
                continue;
            }
            let mut next = elems.clone();
            for c in self.cyclic(g).into_iter().skip(1) {
                for &s in &elems {
                    let e = self.add(s, c);
                    if set.insert(e) {
                        next.push(e);
                    }
                }
            }
            elems = next;
        }
        elems.sort_unstable();
        SubgroupRecord {
            ambient: self.clone(),
            elements: elems,
        }
    }

    /// Every subgroup exactly once, ordered by increasing order then by
    /// element list.
    pub fn subgroups(&self) -> Vec<SubgroupRecord> {
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut queue = VecDeque::new();
        let trivial = self.span(&[]);
        seen.insert(ElementSet::from_slice(self.order, &trivial.elements).words);
        queue.push_back(trivial);
        let mut out = Vec::new();
        while let Some(sub) = queue.pop_front() {
            let members = ElementSet::from_slice(self.order, &sub.elements);
            for g in 0..self.order {
                if members.contains(g) {
                    continue;
                }
                let bigger = self.join_element(&sub, &members, g);
                let key = ElementSet::from_slice(self.order, &bigger.elements).words;
                if seen.insert(key) {
                    queue.push_back(bigger);
                }
            }
            out.push(sub);
        }
        out.sort_by(|a, b| {
            a.elements
                .len()
                .cmp(&b.elements.len())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        out
    }

    fn join_element(&self, sub: &SubgroupRecord, members: &ElementSet, g: usize) -> SubgroupRecord {
        let mut set = members.clone();
        let mut elems = sub.elements.clone();
        for c in self.cyclic(g).into_iter().skip(1) {
            if members.contains(c) {
                break;
            }
            for &s in &sub.elements {
                let e = self.add(s, c);
                if set.insert(e) {
                    elems.push(e);
                }
            }
        }
        elems.sort_unstable();
        SubgroupRecord {
            ambient: self.clone(),
            elements: elems,
        }
    }

    /// Checks that `elements` is a subgroup of this group.
    pub fn subgroup_from_elements(&self, elements: Vec<usize>) -> Result<SubgroupRecord, GroupError> {
        let mut elements = elements;
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&e| e >= self.order) {
            return Err(GroupError::NotASubgroup);
        }
        let set = ElementSet::from_slice(self.order, &elements);
        if !set.contains(0) {
            return Err(GroupError::NotASubgroup);
        }
        for &a in &elements {
            for &b in &elements {
                if !set.contains(self.sub(a, b)) {
                    return Err(GroupError::NotASubgroup);
                }
            }
        }
        Ok(SubgroupRecord {
            ambient: self.clone(),
            elements,
        })
    }
}

/// A subgroup given by its explicit element set (sorted mixed-radix indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupRecord {
    ambient: FiniteAbelian,
    elements: Vec<usize>,
}

impl SubgroupRecord {
    pub fn ambient(&self) -> &FiniteAbelian {
        &self.ambient
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &SubgroupRecord) -> bool {
        self.ambient == other.ambient && self.elements.iter().all(|&e| other.contains(e))
    }

    /// Elements as residue tuples.
    pub fn tuples(&self) -> Vec<Vec<u64>> {
        self.elements.iter().map(|&e| self.ambient.decode(e)).collect()
    }

    /// Isomorphism type, read off from the torsion filtration
    /// `λ'_j = log_p |S[p^j]| − log_p |S[p^{j−1}]|`.
    pub fn p_type(&self, p: u64) -> Result<PGroupType, GroupError> {
        let mut conj = Vec::new();
        let mut prev = 1usize;
        let mut power = 1u64;
        while prev < self.elements.len() {
            power = power.checked_mul(p).ok_or(GroupError::NotAPGroup(p))?;
            let count = self
                .elements
                .iter()
                .filter(|&&e| self.ambient.scale(power, e) == 0)
                .count();
            if count == prev {
                return Err(GroupError::NotAPGroup(p));
            }
            let mut ratio = count / prev;
            let mut log = 0u32;
            while ratio > 1 {
                if ratio as u64 % p != 0 {
                    return Err(GroupError::NotAPGroup(p));
                }
                ratio /= p as usize;
                log += 1;
            }
            conj.push(log);
            prev = count;
        }
        let conj = Partition::new(conj).map_err(|_| GroupError::NotAPGroup(p))?;
        PGroupType::new(p, conj.conjugate())
    }
}

/// The subgroup lattice of an explicit group with its Möbius function
/// `μ(K, G)` towards the top element.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    subgroups: Vec<SubgroupRecord>,
    mu_to_top: Vec<i64>,
}

impl SubgroupLattice {
    pub fn new(ambient: &FiniteAbelian) -> Self {
        let subgroups = ambient.subgroups();
        let sets: Vec<ElementSet> = subgroups
            .iter()
            .map(|s| ElementSet::from_slice(ambient.order(), &s.elements))
            .collect();
        let count = subgroups.len();
        let mut mu = vec![0i64; count];
        // Sorted by increasing order, so the top is last and every proper
        // overgroup of index i sits at a larger index.
        for i in (0..count).rev() {
            if i == count - 1 {
                mu[i] = 1;
                continue;
            }
            let mut acc = 0i64;
            for j in i + 1..count {
                if subgroups[j].elements.len() > subgroups[i].elements.len()
                    && sets[i].is_subset(&sets[j])
                {
                    acc += mu[j];
                }
            }
            mu[i] = -acc;
        }
        SubgroupLattice {
            subgroups,
            mu_to_top: mu,
        }
    }

    pub fn subgroups(&self) -> &[SubgroupRecord] {
        &self.subgroups
    }

    /// `(K, μ(K, G))` for every subgroup `K`.
    pub fn with_moebius(&self) -> impl Iterator<Item = (&SubgroupRecord, i64)> {
        self.subgroups.iter().zip(self.mu_to_top.iter().copied())
    }

    pub fn moebius_of(&self, k: &SubgroupRecord) -> Option<i64> {
        self.subgroups
            .iter()
            .position(|s| s == k)
            .map(|i| self.mu_to_top[i])
    }
}

/// Every subgroup of `G` (or `G × G` when `square`), guarded by
/// [`ENUMERATION_LIMIT`].
pub fn enumerate_subgroups(g: &PGroupType, square: bool) -> Result<Vec<SubgroupRecord>, GroupError> {
    let ambient = if square {
        g.explicit_square(ENUMERATION_LIMIT)?
    } else {
        g.explicit(ENUMERATION_LIMIT)?
    };
    Ok(ambient.subgroups())
}

/// `μ(K, G)` on the subgroup lattice of `G`.
pub fn moebius(k: &SubgroupRecord, g: &PGroupType) -> Result<i64, GroupError> {
    let ambient = g.explicit(ENUMERATION_LIMIT)?;
    if k.ambient() != &ambient {
        return Err(GroupError::NotASubgroup);
    }
    let k = ambient.subgroup_from_elements(k.elements().to_vec())?;
    let lattice = SubgroupLattice::new(&ambient);
    lattice.moebius_of(&k).ok_or(GroupError::NotASubgroup)
}

#[derive(Clone, Debug)]
pub(crate) struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub(crate) fn new(size: usize) -> Self {
        ElementSet {
            words: vec![0; size.div_ceil(64)],
        }
    }

    pub(crate) fn from_slice(size: usize, elems: &[usize]) -> Self {
        let mut s = ElementSet::new(size);
        for &e in elems {
            s.insert(e);
        }
        s
    }

    pub(crate) fn insert(&mut self, e: usize) -> bool {
        let (w, b) = (e / 64, e % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub(crate) fn contains(&self, e: usize) -> bool {
        self.words[e / 64] & (1 << (e % 64)) != 0
    }

    pub(crate) fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_counts() {
        let count = |p, lam: &[u32]| enumerate_subgroups(&PGroupType::of(p, lam), false).unwrap().len();
        assert_eq!(count(2, &[1]), 2);
        assert_eq!(count(2, &[1, 1]), 5);
        assert_eq!(count(3, &[2]), 3);
        assert_eq!(count(2, &[1, 1, 1, 1]), 67);
        assert_eq!(count(2, &[2, 1]), 8);
    }

    #[test]
    fn subgroup_types_are_read_off_correctly() {
        let g = PGroupType::of(2, &[2, 1]);
        let subs = enumerate_subgroups(&g, false).unwrap();
        let mut types: Vec<String> = subs.iter().map(|s| s.p_type(2).unwrap().to_string()).collect();
        types.sort();
        // Z/4 x Z/2: 1, three Z/2, two Z/4, one (Z/2)^2, the whole group.
        assert_eq!(types.iter().filter(|t| *t == "Z/2").count(), 3);
        assert_eq!(types.iter().filter(|t| *t == "Z/2^2").count(), 2);
        assert_eq!(types.iter().filter(|t| *t == "Z/2 x Z/2").count(), 1);
        assert_eq!(subs.last().unwrap().p_type(2).unwrap(), g);
    }

    #[test]
    fn moebius_examples() {
        let g = PGroupType::of(2, &[1, 1]);
        let ambient = g.explicit(ENUMERATION_LIMIT).unwrap();
        let subs = ambient.subgroups();
        let top = subs.last().unwrap();
        assert_eq!(moebius(top, &g).unwrap(), 1);
        assert_eq!(moebius(&subs[0], &g).unwrap(), 2);
        assert_eq!(moebius(&subs[1], &g).unwrap(), -1);

        let cyclic = PGroupType::of(3, &[2]);
        let amb = cyclic.explicit(ENUMERATION_LIMIT).unwrap();
        let index_p = amb.span(&[3]);
        assert_eq!(moebius(&index_p, &cyclic).unwrap(), -1);
        let trivial = amb.span(&[]);
        assert_eq!(moebius(&trivial, &cyclic).unwrap(), 0);
    }

    #[test]
    fn moebius_rejects_foreign_sets() {
        let g = PGroupType::of(2, &[2]);
        let ambient = g.explicit(ENUMERATION_LIMIT).unwrap();
        assert!(matches!(
            ambient.subgroup_from_elements(vec![0, 1]),
            Err(GroupError::NotASubgroup)
        ));
        let other = PGroupType::of(2, &[1, 1]).explicit(ENUMERATION_LIMIT).unwrap();
        let k = other.span(&[1]);
        assert!(matches!(moebius(&k, &g), Err(GroupError::NotASubgroup)));
    }

    /// Closed form for abelian p-groups: `μ(K, G) = (−1)^k p^{k(k−1)/2}` when
    /// `G/K` is elementary abelian of rank `k`, else 0.
    #[test]
    fn moebius_matches_elementary_quotient_rule() {
        for (p, lam) in [(2u64, vec![2u32, 1]), (2, vec![1, 1, 1]), (3, vec![1, 1]), (2, vec![2, 2])] {
            let g = PGroupType::of(p, &lam);
            let ambient = g.explicit(ENUMERATION_LIMIT).unwrap();
            let lattice = SubgroupLattice::new(&ambient);
            for (k, mu) in lattice.with_moebius() {
                let pg = ambient.span(
                    &(0..ambient.order())
                        .map(|e| ambient.scale(p, e))
                        .collect::<Vec<_>>(),
                );
                let index = ambient.order() / k.order();
                let elementary = pg.is_subgroup_of(k);
                let expected = if elementary {
                    let rank = (index as f64).log(p as f64).round() as u32;
                    let sign = if rank % 2 == 0 { 1 } else { -1 };
                    sign * (p as i64).pow(rank * rank.saturating_sub(1) / 2)
                } else {
                    0
                };
                assert_eq!(mu, expected, "G={g}, |K|={}", k.order());
            }
        }
    }

    #[test]
    fn moebius_sums_vanish_on_nontrivial_groups() {
        for g in PGroupType::all_up_to(2, 4).unwrap().into_iter().chain(PGroupType::all_up_to(3, 2).unwrap()) {
            let lattice = SubgroupLattice::new(&g.explicit(ENUMERATION_LIMIT).unwrap());
            let total: i64 = lattice.with_moebius().map(|(_, m)| m).sum();
            assert_eq!(total, if g.is_trivial() { 1 } else { 0 }, "G={g}");
        }
    }

    #[test]
    fn guard_rejects_large_ambients() {
        let g = PGroupType::of(2, &[13]);
        assert!(matches!(
            enumerate_subgroups(&g, false),
            Err(GroupError::GroupTooLarge { .. })
        ));
        let sq = PGroupType::of(2, &[7]);
        assert!(enumerate_subgroups(&sq, true).is_err());
    }
}
