use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentKind};
use super::{ExperimentError, VerifyOptions};
use crate::groups::{aut_order, ext_square_order, sym_square_order, tensor_square_order, PGroupType, Partition, SubgroupLattice, ENUMERATION_LIMIT};
use crate::linalg::{CokernelClass, Symmetry};
use crate::models::{trial_rng, EntryDistribution, MatrixModel};
use crate::oracle::{
    exact_hom_moment, exhaustive_aut_order, fourier_hom_moment, graph_coset_criterion, hom_count_from_class,
    is_trivial_tuple, isotropic_census, isotropic_census_formula, sin_sum_check, sur_count, tensor_square_orders,
    trivial_part_census, trivial_part_count, zero_column_bound, AffineMap, Flavor, IsotropicFlavor, MomentModel,
    OracleError, PairingSpec, WeightedGraph,
};

const MOMENT_TOLERANCE: f64 = 1e-9;
const SIN_TOLERANCE: f64 = 1e-10;
const SIN_MAPS: usize = 100;

/// One oracle comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub case: String,
    pub computed: String,
    pub expected: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn to_json(&self) -> Result<String, ExperimentError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| ExperimentError::Output(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String, ExperimentError> {
        let io = |e: csv::Error| ExperimentError::Output(e.to_string());
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(["check", "case", "computed", "expected", "pass"]).map_err(io)?;
        for c in &self.checks {
            w.write_record([&c.check, &c.case, &c.computed, &c.expected, &c.pass.to_string()]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| ExperimentError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| ExperimentError::Output(e.to_string()))
    }

    /// Records of one check family.
    pub fn family(&self, check: &str) -> impl Iterator<Item = &CheckRecord> {
        let check = check.to_string();
        self.checks.iter().filter(move |c| c.check == check)
    }
}

struct Battery(Vec<CheckRecord>);

impl Battery {
    fn push(&mut self, check: &str, case: String, computed: impl ToString, expected: impl ToString, pass: bool) {
        self.0.push(CheckRecord {
            check: check.into(),
            case,
            computed: computed.to_string(),
            expected: expected.to_string(),
            pass,
        });
    }

    fn equal<T: PartialEq + ToString>(&mut self, check: &str, case: String, computed: T, expected: T) {
        let pass = computed == expected;
        self.push(check, case, computed, expected, pass);
    }
}

fn group_label(g: &PGroupType) -> String {
    let parts: Vec<String> = g.lambda().parts().iter().map(|x| x.to_string()).collect();
    format!("p={} ({})", g.p(), parts.join(","))
}

fn groups_with_order_at_most(limit: u64) -> Result<Vec<PGroupType>, ExperimentError> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        let max_log = (1..).take_while(|&k| p.pow(k) <= limit).last().unwrap_or(0);
        if max_log > 0 {
            out.extend(PGroupType::all_up_to(p, max_log)?.into_iter().filter(|g| !g.is_trivial()));
        }
    }
    Ok(out)
}

/// Runs every oracle cross-check. `master_seed` seeds the random affine
/// maps; `verify` options bound the exhaustive automorphism counts and
/// may replace expected `|Aut|` values.
pub fn run_verify(config: &ExperimentConfig) -> Result<VerifyReport, ExperimentError> {
    if config.kind != ExperimentKind::Verify {
        return Err(ExperimentError::Config(format!("expected a verify config, got {}", config.kind.name())));
    }
    let options = config.verify.clone().unwrap_or_default();
    let mut b = Battery(Vec::new());
    moment_checks(&mut b)?;
    hom_sur_checks(&mut b)?;
    aut_checks(&mut b, &options)?;
    tensor_checks(&mut b)?;
    isotropic_checks(&mut b)?;
    census_checks(&mut b)?;
    sin_checks(&mut b, config.master_seed)?;
    zero_column_checks(&mut b)?;
    let failed = b.0.iter().filter(|c| !c.pass).count();
    Ok(VerifyReport {
        passed: failed == 0,
        total: b.0.len(),
        failed,
        checks: b.0,
    })
}

fn moment_checks(b: &mut Battery) -> Result<(), ExperimentError> {
    for (p, d) in [(2u64, 1u32), (3, 1), (2, 2)] {
        let m = p.pow(d);
        let groups: Vec<PGroupType> = groups_with_order_at_most(4)?
            .into_iter()
            .filter(|g| g.p() == p && g.log_exponent() <= d)
            .collect();
        let laws = [
            ("spike01", EntryDistribution::spike01(0.3, m)?),
            ("spike-uniform", EntryDistribution::spike_uniform(0.3, m)?),
        ];
        for g in &groups {
            for (law_name, law) in &laws {
                for n in 1..=2usize {
                    let mut models: Vec<(&str, MomentModel)> = [
                        ("general", Symmetry::General),
                        ("symmetric", Symmetry::Symmetric),
                        ("alternating", Symmetry::Alternating),
                    ]
                    .into_iter()
                    .map(|(name, s)| Ok((name, MomentModel::Matrix(MatrixModel::new(s, n, law.clone())?))))
                    .collect::<Result<_, ExperimentError>>()?;
                    models.push(("graph", MomentModel::Graph(WeightedGraph::new(n, law.clone())?)));
                    for (model_name, model) in models {
                        let exact = exact_hom_moment(&model, g, d)?;
                        let exact_f = exact.to_f64().unwrap_or(f64::NAN);
                        let fourier = fourier_hom_moment(&model, g, d)?;
                        let case = format!("{model_name} {law_name} n={n} p^d={m} G={}", group_label(g));
                        let pass = (exact_f - fourier).abs() <= MOMENT_TOLERANCE;
                        b.push("moment-cross-oracle", case, fourier, exact, pass);
                    }
                }
            }
        }
    }
    Ok(())
}

fn hom_sur_checks(b: &mut Battery) -> Result<(), ExperimentError> {
    for g in groups_with_order_at_most(16)? {
        let lattice = SubgroupLattice::new(&g.explicit(ENUMERATION_LIMIT)?);
        let subgroups: Vec<PGroupType> = lattice.subgroups().iter().map(|k| k.p_type(g.p())).collect::<Result<_, _>>()?;
        let d = g.log_exponent().max(3);
        for total in 0..=9 {
            for lambda in Partition::all_of_size(total) {
                if lambda.len() > 3 || lambda.largest() > 3 {
                    continue;
                }
                let c = CokernelClass::from_exponents(g.p(), d, lambda.parts());
                let hom = hom_count_from_class(&c, &g)?;
                let sum = subgroups.iter().map(|k| sur_count(&c, k)).sum::<Result<BigUint, OracleError>>()?;
                b.equal("hom-sur", format!("X={c} G={}", group_label(&g)), hom, sum);
            }
        }
    }
    Ok(())
}

fn aut_checks(b: &mut Battery, options: &VerifyOptions) -> Result<(), ExperimentError> {
    let overrides: BTreeMap<(u64, Vec<u32>), u64> = options
        .aut_overrides
        .iter()
        .map(|o| ((o.p, Partition::from_unsorted(o.parts.clone()).parts().to_vec()), o.order))
        .collect();
    for g in groups_with_order_at_most(options.aut_max_order)? {
        let key = (g.p(), g.lambda().parts().to_vec());
        let expected = overrides.get(&key).map_or_else(|| aut_order(&g), |&o| BigUint::from(o));
        b.equal("aut-order", group_label(&g), exhaustive_aut_order(&g)?, expected);
    }
    Ok(())
}

fn tensor_checks(b: &mut Battery) -> Result<(), ExperimentError> {
    for g in groups_with_order_at_most(64)? {
        let orders = tensor_square_orders(&g)?;
        let label = group_label(&g);
        b.equal("tensor-square", label.clone(), orders.tensor, tensor_square_order(&g));
        b.equal("exterior-square", label.clone(), orders.exterior, ext_square_order(&g));
        b.equal("symmetric-square", label, orders.symmetric, sym_square_order(&g));
    }
    Ok(())
}

fn isotropic_checks(b: &mut Battery) -> Result<(), ExperimentError> {
    for g in [PGroupType::of(2, &[1]), PGroupType::of(3, &[1]), PGroupType::of(2, &[2]), PGroupType::of(2, &[1, 1])] {
        for (name, flavor) in [("alternating", IsotropicFlavor::Alternating), ("symmetric", IsotropicFlavor::SymmetricVanishing)] {
            let census = isotropic_census(&g, flavor)?;
            let formula = isotropic_census_formula(&g, flavor)?;
            b.equal("isotropic-census", format!("{name} G={}", group_label(&g)), BigUint::from(census.max_count), formula);
        }
    }
    Ok(())
}

fn census_checks(b: &mut Battery) -> Result<(), ExperimentError> {
    let z2 = PGroupType::of(2, &[1]);
    let spec = PairingSpec::new(Flavor::U1B1, &z2, 1)?;
    let mut prev = 0.0;
    for n in 1..=3usize {
        let count = trivial_part_count(&spec, n)?;
        let ratio = count as f64 / 2f64.powi(n as i32);
        let pass = ratio >= prev && ratio < 2.0;
        b.push("main-term-monotone", format!("u1b1 G=Z/2 n={n}"), ratio, format!("in [{prev}, 2)"), pass);
        prev = ratio;
    }
    for g in [PGroupType::of(2, &[1]), PGroupType::of(2, &[2]), PGroupType::of(2, &[1, 1]), PGroupType::of(3, &[1])] {
        for flavor in Flavor::ALL {
            let spec = PairingSpec::new(flavor, &g, g.log_exponent())?;
            for n in 1..=3usize {
                if (spec.square_order() as u64).pow(n as u32) > 1 << 20 {
                    continue;
                }
                let case = format!("{flavor:?} G={} n={n}", group_label(&g)).to_lowercase();
                b.equal("trivial-census", case, BigUint::from(trivial_part_count(&spec, n)?), trivial_part_census(&spec, n)?);
            }
        }
    }
    let spec = PairingSpec::new(Flavor::U4B4, &z2, 1)?;
    let size = spec.square_order();
    for n in 1..=3u32 {
        let mut agree = 0usize;
        let total = size.pow(n);
        for code in 0..total {
            let tuple: Vec<usize> = (0..n).map(|k| code / size.pow(k) % size).collect();
            agree += (graph_coset_criterion(&spec, &tuple)? == is_trivial_tuple(&spec, &tuple)) as usize;
        }
        b.equal("graph-coset", format!("G=Z/2 n={n}"), agree, total);
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn sin_checks(b: &mut Battery, seed: u64) -> Result<(), ExperimentError> {
    let mut rng = trial_rng(seed, "verify-sin-sums", 0, 0);
    for moduli in [vec![2u64], vec![4], vec![8, 4], vec![32], vec![2, 2, 2, 2, 2], vec![3, 9], vec![27], vec![5, 5], vec![4, 2, 2]] {
        let ambient = crate::groups::FiniteAbelian::new(moduli.clone(), 64)?;
        let choices: Vec<u64> = (2..=*moduli.iter().max().unwrap_or(&2)).filter(|m| moduli.iter().any(|q| q % m == 0)).collect();
        for h in ambient.subgroups().into_iter().filter(|h| h.order() > 1 && h.order() <= 32) {
            let (mut tried, mut worst, mut attempts) = (0, 0.0f64, 0);
            let target = h.order() as f64 / 2.0;
            while tried < SIN_MAPS && attempts < 100_000 {
                attempts += 1;
                let m = choices[rng.gen_range(0..choices.len())];
                let l = AffineMap {
                    modulus: m,
                    constant: rng.gen_range(0..m),
                    coefficients: moduli.iter().map(|&q| m / gcd(m, q) * rng.gen_range(0..m)).collect(),
                };
                match sin_sum_check(&h, &l) {
                    Ok(s) => {
                        worst = worst.max((s - target).abs());
                        tried += 1;
                    }
                    Err(OracleError::ConstantMap) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            let case = format!("Z{moduli:?} |H|={} maps={tried}", h.order());
            b.push("sin-sum", case, format!("max deviation {worst:e}"), target, tried == SIN_MAPS && worst <= SIN_TOLERANCE);
        }
    }
    Ok(())
}

/// `1/(k+1)!` never exceeds the Poisson(1) tail `P(Z ≥ k)`.
fn zero_column_checks(b: &mut Battery) -> Result<(), ExperimentError> {
    for k in 1..=6u32 {
        let bound = zero_column_bound(k)?;
        let mut term = BigRational::from_integer(1.into());
        let mut head = BigRational::from_integer(0.into());
        for j in 0..k {
            if j > 0 {
                term /= BigRational::from_integer(j.into());
            }
            head += &term;
        }
        let tail = 1.0 - (-1f64).exp() * head.to_f64().unwrap_or(f64::NAN);
        let bound_f = bound.to_f64().unwrap_or(f64::NAN);
        b.push("zero-column-bound", format!("k={k}"), bound, format!("<= {tail}"), bound_f <= tail);
    }
    Ok(())
}
