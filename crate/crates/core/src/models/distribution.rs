use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::groups::prime_divisors;

/// Below this nonzero probability, free entries are drawn by geometric
/// skipping instead of one uniform per entry.
const SKIP_THRESHOLD: f64 = 0.05;

/// A finitely supported law on `Z/m` with exact rational probabilities.
///
/// Serializes as `{"modulus":4,"support":[{"residue":0,"probability":"4/5"},…]}`;
/// probabilities may also be given as JSON numbers.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution", into = "RawDistribution")]
pub struct EntryDistribution {
    modulus: u64,
    support: Vec<(u64, BigRational)>,
    sampler: Sampler,
}

impl PartialEq for EntryDistribution {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.support == other.support
    }
}

#[derive(Serialize, Deserialize)]
struct RawDistribution {
    modulus: u64,
    support: Vec<RawAtom>,
}

#[derive(Serialize, Deserialize)]
struct RawAtom {
    residue: u64,
    probability: RawProb,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawProb {
    Exact(String),
    Float(f64),
}

impl TryFrom<RawDistribution> for EntryDistribution {
    type Error = ModelError;

    fn try_from(raw: RawDistribution) -> Result<Self, Self::Error> {
        let mut support = Vec::with_capacity(raw.support.len());
        for atom in raw.support {
            let q = match atom.probability {
                RawProb::Exact(s) => s.parse::<BigRational>().map_err(|_| ModelError::InvalidProbability(s))?,
                RawProb::Float(x) => float_to_rational(x)?,
            };
            support.push((atom.residue, q));
        }
        EntryDistribution::new(raw.modulus, support)
    }
}

impl From<EntryDistribution> for RawDistribution {
    fn from(d: EntryDistribution) -> Self {
        RawDistribution {
            modulus: d.modulus,
            support: d
                .support
                .into_iter()
                .map(|(residue, q)| RawAtom {
                    residue,
                    probability: RawProb::Exact(q.to_string()),
                })
                .collect(),
        }
    }
}

/// Exact binary value of a finite float.
pub(crate) fn float_to_rational(x: f64) -> Result<BigRational, ModelError> {
    BigRational::from_float(x).ok_or_else(|| ModelError::InvalidProbability(x.to_string()))
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Precomputed float tables for drawing.
#[derive(Clone, Debug)]
struct Sampler {
    /// `P(x ≠ 0)`.
    nonzero: f64,
    /// `ln(1 − P(x ≠ 0))`, used for geometric gaps.
    log_zero: f64,
    /// Residues with cumulative probabilities over the whole support.
    full: Vec<(u64, f64)>,
    /// Nonzero residues with cumulative conditional probabilities.
    conditional: Vec<(u64, f64)>,
}

impl Sampler {
    fn new(support: &[(u64, BigRational)]) -> Self {
        let mut full = Vec::new();
        let mut acc = BigRational::zero();
        for (r, q) in support {
            acc += q;
            full.push((*r, to_f64(&acc)));
        }
        let nonzero_mass: BigRational = support.iter().filter(|(r, _)| *r != 0).map(|(_, q)| q.clone()).sum();
        let mut conditional = Vec::new();
        if !nonzero_mass.is_zero() {
            let mut acc = BigRational::zero();
            for (r, q) in support.iter().filter(|(r, _)| *r != 0) {
                acc += q;
                conditional.push((*r, to_f64(&(acc.clone() / &nonzero_mass))));
            }
        }
        if let Some(last) = full.last_mut() {
            last.1 = 1.0;
        }
        if let Some(last) = conditional.last_mut() {
            last.1 = 1.0;
        }
        let nonzero = to_f64(&nonzero_mass);
        Sampler {
            nonzero,
            log_zero: (-nonzero).ln_1p(),
            full,
            conditional,
        }
    }

    fn lookup(table: &[(u64, f64)], u: f64) -> u64 {
        let k = table.partition_point(|&(_, c)| c <= u);
        table[k.min(table.len() - 1)].0
    }
}

impl EntryDistribution {
    /// Atoms with distinct residues in `[0, m)` and positive probabilities
    /// summing to exactly 1; zero-probability atoms are dropped.
    pub fn new(modulus: u64, atoms: Vec<(u64, BigRational)>) -> Result<Self, ModelError> {
        if modulus < 2 {
            return Err(ModelError::InvalidModulus(modulus));
        }
        let mut support: Vec<(u64, BigRational)> = Vec::with_capacity(atoms.len());
        for (r, q) in atoms {
            if r >= modulus {
                return Err(ModelError::ResidueOutOfRange { residue: r, modulus });
            }
            if q.is_negative() || q > BigRational::one() {
                return Err(ModelError::InvalidProbability(q.to_string()));
            }
            if q.is_zero() {
                continue;
            }
            support.push((r, q));
        }
        support.sort_by_key(|(r, _)| *r);
        if support.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(ModelError::DuplicateResidue);
        }
        let total: BigRational = support.iter().map(|(_, q)| q.clone()).sum();
        if total != BigRational::one() {
            return Err(ModelError::NotNormalized(total.to_string()));
        }
        let sampler = Sampler::new(&support);
        Ok(EntryDistribution {
            modulus,
            support,
            sampler,
        })
    }

    /// From float probabilities; each is read as its exact binary value and
    /// the vector is rescaled to sum to 1, provided the float sum is within
    /// `1e-9` of 1.
    pub fn from_f64(modulus: u64, atoms: &[(u64, f64)]) -> Result<Self, ModelError> {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if !total.is_finite() || (total - 1.0).abs() > 1e-9 {
            return Err(ModelError::NotNormalized(total.to_string()));
        }
        let exact: Vec<(u64, BigRational)> =
            atoms.iter().map(|&(r, x)| Ok((r, float_to_rational(x)?))).collect::<Result<_, ModelError>>()?;
        let sum: BigRational = exact.iter().map(|(_, q)| q.clone()).sum();
        EntryDistribution::new(modulus, exact.into_iter().map(|(r, q)| (r, q / &sum)).collect())
    }

    pub fn uniform(modulus: u64) -> Result<Self, ModelError> {
        let q = BigRational::new(BigInt::one(), BigInt::from(modulus));
        EntryDistribution::new(modulus, (0..modulus).map(|r| (r, q.clone())).collect())
    }

    /// `P(0) = 1 − α`, `P(1) = α`.
    pub fn spike01(alpha: f64, modulus: u64) -> Result<Self, ModelError> {
        let a = checked_alpha(alpha)?;
        EntryDistribution::new(modulus, vec![(0, BigRational::one() - &a), (1, a)])
    }

    /// `P(0) = 1 − α`, `P(r) = α/(m − 1)` for `r ≠ 0`.
    pub fn spike_uniform(alpha: f64, modulus: u64) -> Result<Self, ModelError> {
        let a = checked_alpha(alpha)?;
        if modulus < 2 {
            return Err(ModelError::InvalidModulus(modulus));
        }
        let each = &a / BigRational::from_integer(BigInt::from(modulus - 1));
        let mut atoms = vec![(0, BigRational::one() - &a)];
        atoms.extend((1..modulus).map(|r| (r, each.clone())));
        EntryDistribution::new(modulus, atoms)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn support(&self) -> &[(u64, BigRational)] {
        &self.support
    }

    pub fn probability(&self, residue: u64) -> BigRational {
        self.support
            .iter()
            .find(|(r, _)| *r == residue)
            .map_or_else(BigRational::zero, |(_, q)| q.clone())
    }

    /// The law of `x mod d` for a divisor `d` of the modulus.
    pub fn reduce(&self, d: u64) -> Result<EntryDistribution, ModelError> {
        if d < 2 || self.modulus % d != 0 {
            return Err(ModelError::InvalidModulus(d));
        }
        let mut mass = vec![BigRational::zero(); d as usize];
        for (r, q) in &self.support {
            mass[(r % d) as usize] += q;
        }
        EntryDistribution::new(d, mass.into_iter().enumerate().map(|(r, q)| (r as u64, q)).collect())
    }

    /// `1 − max_{p | m, a} P(x ≡ a mod p)`: the certified balancedness.
    pub fn alpha_of(&self) -> BigRational {
        let mut worst = BigRational::zero();
        for p in prime_divisors(self.modulus) {
            let mut mass = vec![BigRational::zero(); p as usize];
            for (r, q) in &self.support {
                mass[(r % p) as usize] += q;
            }
            for q in mass {
                if q > worst {
                    worst = q;
                }
            }
        }
        BigRational::one() - worst
    }

    pub fn alpha_of_f64(&self) -> f64 {
        to_f64(&self.alpha_of())
    }

    /// `P(x ≠ 0)` as a float.
    pub fn nonzero_probability(&self) -> f64 {
        self.sampler.nonzero
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        Sampler::lookup(&self.sampler.full, rng.gen::<f64>())
    }

    /// Draws `count` independent entries, calling `f(index, value)` for the
    /// nonzero ones in increasing index order.
    pub fn for_each_nonzero<R: Rng + ?Sized>(&self, count: usize, rng: &mut R, mut f: impl FnMut(usize, u64)) {
        let s = &self.sampler;
        if s.nonzero <= 0.0 {
            return;
        }
        if s.nonzero >= SKIP_THRESHOLD {
            for idx in 0..count {
                let x = Sampler::lookup(&s.full, rng.gen::<f64>());
                if x != 0 {
                    f(idx, x);
                }
            }
            return;
        }
        let mut idx = 0usize;
        loop {
            // U in (0, 1]; the number of zeros before the next nonzero is
            // floor(ln U / ln P(0)).
            let u = 1.0 - rng.gen::<f64>();
            let gap = (u.ln() / s.log_zero).floor();
            if !gap.is_finite() || gap >= (count - idx) as f64 {
                return;
            }
            idx += gap as usize;
            let x = if s.conditional.len() == 1 {
                s.conditional[0].0
            } else {
                Sampler::lookup(&s.conditional, rng.gen::<f64>())
            };
            f(idx, x);
            idx += 1;
            if idx >= count {
                return;
            }
        }
    }
}

fn checked_alpha(alpha: f64) -> Result<BigRational, ModelError> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(ModelError::InvalidAlpha(alpha));
    }
    float_to_rational(alpha)
}

/// `c · ln(n) / n`, clamped to `1/2`.
pub fn alpha_schedule(c: f64, n: usize) -> Result<f64, ModelError> {
    if !(c > 0.0 && c.is_finite()) || n < 2 {
        return Err(ModelError::InvalidSchedule { c, n });
    }
    Ok((c * (n as f64).ln() / n as f64).min(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn schedule_examples() {
        assert!((alpha_schedule(1.0, 7).unwrap() - 0.2780).abs() < 1e-4);
        assert!((alpha_schedule(2.0, 100).unwrap() - 0.0921).abs() < 1e-4);
        assert_eq!(alpha_schedule(5.0, 3).unwrap(), 0.5);
        assert!(alpha_schedule(0.0, 10).is_err());
        assert!(alpha_schedule(1.0, 1).is_err());
    }

    #[test]
    fn spike_families() {
        let d = EntryDistribution::spike01(0.5, 2).unwrap();
        assert_eq!(d, EntryDistribution::uniform(2).unwrap());
        let d = EntryDistribution::spike01(0.1, 4).unwrap();
        assert_eq!(d.alpha_of(), float_to_rational(0.1).unwrap());
        for a in [0.01, 0.1, 0.25, 0.37, 0.5] {
            for m in [2, 3, 4, 6, 9] {
                assert_eq!(EntryDistribution::spike01(a, m).unwrap().alpha_of(), float_to_rational(a).unwrap());
            }
        }
        assert_eq!(EntryDistribution::spike_uniform(0.5, 2).unwrap(), EntryDistribution::uniform(2).unwrap());
        let d = EntryDistribution::spike_uniform(0.2, 4).unwrap();
        assert!((to_f64(&d.probability(3)) - 0.0667).abs() < 1e-4);
        assert!((d.alpha_of_f64() - 0.1333).abs() < 1e-4);
        assert!(EntryDistribution::spike01(0.6, 2).is_err());
    }

    #[test]
    fn validation() {
        assert!(EntryDistribution::new(3, vec![(0, q(1, 2)), (1, q(1, 3))]).is_err());
        assert!(EntryDistribution::new(3, vec![(0, q(1, 2)), (3, q(1, 2))]).is_err());
        assert!(EntryDistribution::new(3, vec![(0, q(1, 2)), (0, q(1, 2))]).is_err());
        assert!(EntryDistribution::from_f64(3, &[(0, 0.7), (2, 0.3)]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let d = EntryDistribution::spike_uniform(0.25, 3).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(
            s,
            r#"{"modulus":3,"support":[{"residue":0,"probability":"3/4"},{"residue":1,"probability":"1/8"},{"residue":2,"probability":"1/8"}]}"#
        );
        assert_eq!(serde_json::from_str::<EntryDistribution>(&s).unwrap(), d);
        let f: EntryDistribution =
            serde_json::from_str(r#"{"modulus":2,"support":[{"residue":0,"probability":0.5},{"residue":1,"probability":0.5}]}"#).unwrap();
        assert_eq!(f, EntryDistribution::uniform(2).unwrap());
    }

    #[test]
    fn reduction_and_alpha() {
        let d = EntryDistribution::new(6, (0..6).map(|r| (r, if r == 0 { q(1, 2) } else { q(1, 10) })).collect()).unwrap();
        // mod 2: P(even) = 1/2 + 2/10; mod 3: P(0) = 1/2 + 1/10.
        assert_eq!(d.reduce(2).unwrap().probability(0), q(7, 10));
        assert_eq!(d.alpha_of(), q(3, 10));
    }

    fn check_frequencies(d: &EntryDistribution, draws: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0u64; d.modulus() as usize];
        let mut nonzero = 0usize;
        d.for_each_nonzero(draws, &mut rng, |_, x| {
            counts[x as usize] += 1;
            nonzero += 1;
        });
        counts[0] = (draws - nonzero) as u64;
        for (r, p) in d.support() {
            let p = to_f64(p);
            let sd = (draws as f64 * p * (1.0 - p)).sqrt();
            let diff = (counts[*r as usize] as f64 - draws as f64 * p).abs();
            assert!(diff <= 5.0 * sd.max(1.0), "residue {r}: {} vs {}", counts[*r as usize], draws as f64 * p);
        }
    }

    #[test]
    fn empirical_frequencies_within_five_sigma() {
        check_frequencies(&EntryDistribution::spike_uniform(0.03, 5).unwrap(), 1_000_000, 1);
        check_frequencies(&EntryDistribution::spike_uniform(0.4, 4).unwrap(), 1_000_000, 2);
        check_frequencies(&EntryDistribution::spike01(0.001, 2).unwrap(), 1_000_000, 3);
        check_frequencies(&EntryDistribution::from_f64(9, &[(0, 0.2), (3, 0.5), (8, 0.3)]).unwrap(), 1_000_000, 4);
    }
}
