use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::pairing::{Flavor, PairingSpec};
use super::{check_budget, OracleError};
use crate::groups::{PGroupType, SubgroupLattice, ENUMERATION_LIMIT};
use crate::linalg::{cokernel_class, CokernelClass, ModMatrix, Symmetry};
use crate::models::{EntryDistribution, GraphModel, MatrixModel, ModelError};

/// `#Hom(X, G)` where `X` has class `c`: `∏_v |G[p^v]|` over the parts,
/// which is also right for saturated parts as long as `p^d` kills `G`.
pub fn hom_count_from_class(c: &CokernelClass, g: &PGroupType) -> Result<BigUint, OracleError> {
    if c.p() != g.p() {
        return Err(crate::groups::GroupError::PrimeMismatch(c.p(), g.p()).into());
    }
    if g.log_exponent() > c.d() {
        return Err(OracleError::LevelTooLow {
            level: c.d(),
            required: g.log_exponent(),
        });
    }
    let log: u32 = c.lambda().parts().iter().map(|&v| g.log_torsion(v)).sum();
    Ok(BigUint::from(g.p()).pow(log))
}

/// `#Sur(X, G) = Σ_{K≤G} μ(K, G) #Hom(X, K)`.
pub fn sur_count(c: &CokernelClass, g: &PGroupType) -> Result<BigUint, OracleError> {
    let ambient = g.explicit(ENUMERATION_LIMIT)?;
    let lattice = SubgroupLattice::new(&ambient);
    let mut total = BigInt::zero();
    for (k, mu) in lattice.with_moebius() {
        if mu == 0 {
            continue;
        }
        let hom = hom_count_from_class(c, &k.p_type(g.p())?)?;
        total += BigInt::from(mu) * BigInt::from(hom);
    }
    Ok(total.to_biguint().expect("surjection count is nonnegative"))
}

/// A complete graph on `n` vertices whose edge weights are independent
/// draws from one law; `cok` refers to the reduced Laplacian.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    weights: EntryDistribution,
}

impl WeightedGraph {
    pub fn new(n: usize, weights: EntryDistribution) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(ModelError::InvalidDimension(n).into());
        }
        Ok(WeightedGraph { n, weights })
    }

    /// The Erdős–Rényi model with its `0/1` edge indicators read in `Z/m`.
    pub fn from_graph_model(model: &GraphModel, m: u64) -> Result<Self, OracleError> {
        let law = model.edge_law();
        let atoms = law.support().iter().map(|(r, q)| (*r, q.clone())).collect();
        WeightedGraph::new(model.n(), EntryDistribution::new(m, atoms)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &EntryDistribution {
        &self.weights
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MomentModel {
    Matrix(MatrixModel),
    Graph(WeightedGraph),
}

impl MomentModel {
    pub fn flavor(&self) -> Flavor {
        match self {
            MomentModel::Matrix(m) => Flavor::of_symmetry(m.kind()),
            MomentModel::Graph(_) => Flavor::U4B4,
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            MomentModel::Matrix(m) => m.modulus(),
            MomentModel::Graph(g) => g.weights.modulus(),
        }
    }

    /// Free positions with their laws reduced mod `m`.
    fn positions(&self, m: u64) -> Result<Vec<((usize, usize), EntryDistribution)>, OracleError> {
        match self {
            MomentModel::Matrix(model) => model
                .free_positions()
                .into_iter()
                .map(|(i, j)| Ok(((i, j), model.law_at(i, j).reduce(m)?)))
                .collect(),
            MomentModel::Graph(g) => {
                let law = g.weights.reduce(m)?;
                let mut out = Vec::new();
                for i in 0..g.n {
                    for j in i + 1..g.n {
                        out.push(((i, j), law.clone()));
                    }
                }
                Ok(out)
            }
        }
    }
}

fn level_modulus(model: &MomentModel, p: u64, d: u32) -> Result<u64, OracleError> {
    let m = crate::linalg::checked_level(p, d)?;
    if model.modulus() % m != 0 {
        return Err(OracleError::ModulusMismatch {
            model: model.modulus(),
            level: m,
        });
    }
    Ok(m)
}

fn assemble(model: &MomentModel, positions: &[((usize, usize), EntryDistribution)], values: &[u64], m: u64) -> ModMatrix {
    match model {
        MomentModel::Matrix(mm) => {
            let n = mm.n();
            let mut entries = vec![0u64; n * n];
            for (((i, j), _), &x) in positions.iter().zip(values) {
                entries[i * n + j] = x;
                match mm.kind() {
                    Symmetry::General => {}
                    Symmetry::Symmetric => entries[j * n + i] = x,
                    Symmetry::Alternating => entries[j * n + i] = (m - x) % m,
                }
            }
            ModMatrix::from_parts_unchecked(n, m, entries, mm.kind())
        }
        MomentModel::Graph(g) => {
            let r = g.n - 1;
            let mut entries = vec![0u64; r * r];
            for (((i, j), _), &x) in positions.iter().zip(values) {
                if *i < r {
                    entries[i * r + i] = (entries[i * r + i] + x) % m;
                }
                if *j < r {
                    entries[j * r + j] = (entries[j * r + j] + x) % m;
                }
                if *j < r {
                    entries[i * r + j] = (m - x) % m;
                    entries[j * r + i] = (m - x) % m;
                }
            }
            ModMatrix::from_parts_unchecked(r, m, entries, Symmetry::Symmetric)
        }
    }
}

/// `E #Hom(cok, G)` by summing over every matrix in the support with its
/// exact probability; entries are read mod `p^d` and `p^d` must kill `G`.
pub fn exact_hom_moment(model: &MomentModel, g: &PGroupType, d: u32) -> Result<BigRational, OracleError> {
    let p = g.p();
    let m = level_modulus(model, p, d)?;
    if g.log_exponent() > d {
        return Err(OracleError::LevelTooLow {
            level: d,
            required: g.log_exponent(),
        });
    }
    let positions = model.positions(m)?;
    let count = positions
        .iter()
        .try_fold(1u128, |acc, (_, law)| acc.checked_mul(law.support().len() as u128))
        .unwrap_or(u128::MAX);
    check_budget(count)?;
    let mut total = BigRational::zero();
    let mut digits = vec![0usize; positions.len()];
    let mut values = vec![0u64; positions.len()];
    loop {
        let mut prob = BigRational::one();
        for (k, ((_, law), &dgt)) in positions.iter().zip(&digits).enumerate() {
            let (r, q) = &law.support()[dgt];
            values[k] = *r;
            prob *= q;
        }
        let a = assemble(model, &positions, &values, m);
        let hom = if a.n() == 0 {
            BigUint::one()
        } else {
            hom_count_from_class(&cokernel_class(&a, p, d)?, g)?
        };
        total += prob * BigRational::from_integer(hom.into());
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(total);
            }
            digits[k] += 1;
            if digits[k] < positions[k].1.support().len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// `t ↦ E ζ^{X t}` for `t ∈ Z/m`, `ζ = e^{2πi/m}`.
fn characteristic(law: &EntryDistribution, m: u64) -> Vec<Complex64> {
    let atoms: Vec<(u64, f64)> = law.support().iter().map(|(r, q)| (*r, q.to_f64().unwrap_or(0.0))).collect();
    (0..m)
        .map(|t| {
            atoms
                .iter()
                .map(|&(r, q)| Complex64::from_polar(q, 2.0 * std::f64::consts::PI * ((r * t) % m) as f64 / m as f64))
                .sum()
        })
        .collect()
}

struct FourierSum<'a> {
    spec: &'a PairingSpec,
    n: usize,
    diagonal: Vec<Option<Vec<Complex64>>>,
    // pair[l][k] for l < k: laws of (l, k) and, for general matrices, (k, l).
    upper: Vec<Vec<Option<Vec<Complex64>>>>,
    lower: Vec<Vec<Option<Vec<Complex64>>>>,
    chosen: Vec<usize>,
}

impl FourierSum<'_> {
    fn recurse(&mut self, k: usize, weight: Complex64) -> Complex64 {
        if k == self.n {
            return weight;
        }
        let mut acc = Complex64::zero();
        for x in 0..self.spec.square_order() {
            let mut w = weight;
            if let Some(phi) = &self.diagonal[k] {
                w *= phi[self.spec.u(x) as usize];
            }
            for l in 0..k {
                let y = self.chosen[l];
                if let Some(phi) = &self.upper[l][k] {
                    w *= phi[self.spec.b(y, x) as usize];
                }
                if let Some(phi) = &self.lower[l][k] {
                    w *= phi[self.spec.b(x, y) as usize];
                }
            }
            if w == Complex64::zero() {
                continue;
            }
            self.chosen[k] = x;
            acc += self.recurse(k + 1, w);
        }
        acc
    }
}

/// `E #Hom(cok, G)` from the character-sum expansion
/// `|G|^{−n} Σ_{x ∈ (G²)^n} ∏ E ζ^{A_kl · B(x_k, x_l)}` (an extra `1/|G|`
/// for graphs), evaluated in floating point.
pub fn fourier_hom_moment(model: &MomentModel, g: &PGroupType, d: u32) -> Result<f64, OracleError> {
    let m = level_modulus(model, g.p(), d)?;
    let spec = PairingSpec::new(model.flavor(), g, d)?;
    let n = match model {
        MomentModel::Matrix(mm) => mm.n(),
        MomentModel::Graph(gr) => gr.n(),
    };
    let order = spec.ambient().order() as u128;
    check_budget(order.checked_pow(2 * n as u32).unwrap_or(u128::MAX))?;
    let mut diagonal = vec![None; n];
    let mut upper = vec![vec![None; n]; n];
    let mut lower = vec![vec![None; n]; n];
    for ((i, j), law) in model.positions(m)? {
        let phi = characteristic(&law, m);
        if i == j {
            diagonal[i] = Some(phi);
        } else if i < j {
            upper[i][j] = Some(phi);
        } else {
            lower[j][i] = Some(phi);
        }
    }
    let mut sum = FourierSum {
        spec: &spec,
        n,
        diagonal,
        upper,
        lower,
        chosen: vec![0; n],
    };
    let total = sum.recurse(0, Complex64::one());
    let extra = if model.flavor() == Flavor::U4B4 { 1 } else { 0 };
    let value = total / (order as f64).powi((n + extra) as i32);
    if value.im.abs() > 1e-9 {
        return Err(OracleError::ImaginaryResidue(value.im));
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(p: u64, d: u32, exps: &[u32]) -> CokernelClass {
        CokernelClass::from_exponents(p, d, exps)
    }

    #[test]
    fn hom_counts() {
        assert_eq!(hom_count_from_class(&class(2, 2, &[]), &PGroupType::of(2, &[2])).unwrap(), BigUint::one());
        assert_eq!(hom_count_from_class(&class(2, 2, &[1]), &PGroupType::of(2, &[2])).unwrap(), BigUint::from(2u32));
        assert_eq!(hom_count_from_class(&class(2, 3, &[2, 1]), &PGroupType::of(2, &[1, 1])).unwrap(), BigUint::from(16u32));
        // saturated part acts as a full copy of G
        assert_eq!(hom_count_from_class(&class(2, 1, &[1]), &PGroupType::of(2, &[1, 1])).unwrap(), BigUint::from(4u32));
        assert!(matches!(
            hom_count_from_class(&class(2, 1, &[1]), &PGroupType::of(2, &[2])),
            Err(OracleError::LevelTooLow { .. })
        ));
    }

    #[test]
    fn sur_counts() {
        assert_eq!(sur_count(&class(2, 2, &[1]), &PGroupType::of(2, &[2])).unwrap(), BigUint::zero());
        assert_eq!(sur_count(&class(2, 2, &[1, 1]), &PGroupType::of(2, &[1])).unwrap(), BigUint::from(3u32));
        assert_eq!(sur_count(&class(2, 2, &[1, 1]), &PGroupType::of(2, &[1, 1])).unwrap(), BigUint::from(6u32));
    }

    fn matrix(kind: Symmetry, n: usize, law: EntryDistribution) -> MomentModel {
        MomentModel::Matrix(MatrixModel::new(kind, n, law).unwrap())
    }

    #[test]
    fn one_by_one_moments() {
        let z2 = PGroupType::of(2, &[1]);
        let general = matrix(Symmetry::General, 1, EntryDistribution::uniform(2).unwrap());
        assert_eq!(exact_hom_moment(&general, &z2, 1).unwrap(), BigRational::new(3.into(), 2.into()));
        let alt = matrix(Symmetry::Alternating, 1, EntryDistribution::spike01(0.3, 2).unwrap());
        assert_eq!(exact_hom_moment(&alt, &z2, 1).unwrap(), BigRational::from_integer(2.into()));
        for model in [general, alt] {
            let exact = exact_hom_moment(&model, &z2, 1).unwrap().to_f64().unwrap();
            assert!((fourier_hom_moment(&model, &z2, 1).unwrap() - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn trivial_group_moment_is_one() {
        let trivial = PGroupType::of(3, &[]);
        let model = matrix(Symmetry::Symmetric, 2, EntryDistribution::spike_uniform(0.3, 3).unwrap());
        assert_eq!(exact_hom_moment(&model, &trivial, 1).unwrap(), BigRational::one());
        assert!((fourier_hom_moment(&model, &trivial, 1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn graph_moments_agree() {
        let z2 = PGroupType::of(2, &[1]);
        for n in 1..=3 {
            let model = MomentModel::Graph(WeightedGraph::from_graph_model(&GraphModel::new(n.max(2), 0.5).unwrap(), 2).unwrap());
            let model = if n == 1 {
                MomentModel::Graph(WeightedGraph::new(1, EntryDistribution::uniform(2).unwrap()).unwrap())
            } else {
                model
            };
            let exact = exact_hom_moment(&model, &z2, 1).unwrap().to_f64().unwrap();
            let fourier = fourier_hom_moment(&model, &z2, 1).unwrap();
            assert!((exact - fourier).abs() < 1e-9, "n={n}: {exact} vs {fourier}");
        }
    }

    #[test]
    fn budget_guard() {
        let model = matrix(Symmetry::General, 5, EntryDistribution::uniform(4).unwrap());
        assert!(matches!(
            exact_hom_moment(&model, &PGroupType::of(2, &[1]), 2),
            Err(OracleError::TooLargeToEnumerate { .. })
        ));
    }
}
