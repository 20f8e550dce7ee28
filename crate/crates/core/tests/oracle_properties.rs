use cokernel_core::groups::{FiniteAbelian, PGroupType, SubgroupLattice, ENUMERATION_LIMIT};
use cokernel_core::linalg::CokernelClass;
use cokernel_core::oracle::{
    count_surjections, graph_coset_criterion, hom_count_from_class, is_trivial_tuple, sin_sum_check, sur_count,
    trivial_part_census, trivial_part_count, AffineMap, Flavor, OracleError, PairingSpec,
};
use cokernel_core::Partition;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn groups_up_to_16() -> Vec<PGroupType> {
    let mut out = Vec::new();
    for (p, max_log) in [(2u64, 4u32), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)] {
        out.extend(PGroupType::all_up_to(p, max_log).unwrap());
    }
    out
}

/// Classes with parts at most 3, at most three parts, at level `d`.
fn classes(p: u64, d: u32) -> Vec<CokernelClass> {
    let mut out = Vec::new();
    for total in 0..=9 {
        for lambda in Partition::all_of_size(total) {
            if lambda.len() <= 3 && lambda.largest() <= 3.min(d) {
                out.push(CokernelClass::from_exponents(p, d, lambda.parts()));
            }
        }
    }
    out
}

#[test]
fn hom_is_sum_of_sur_over_subgroups() {
    for g in groups_up_to_16() {
        let ambient = g.explicit(ENUMERATION_LIMIT).unwrap();
        let lattice = SubgroupLattice::new(&ambient);
        let subgroup_types: Vec<PGroupType> = lattice.subgroups().iter().map(|k| k.p_type(g.p()).unwrap()).collect();
        for c in classes(g.p(), g.log_exponent().max(3)) {
            let hom = hom_count_from_class(&c, &g).unwrap();
            let sum: BigUint = subgroup_types.iter().map(|k| sur_count(&c, k).unwrap()).sum();
            assert_eq!(hom, sum, "{g:?} {c}");
        }
    }
}

#[test]
fn sur_count_matches_listing() {
    for g in PGroupType::all_up_to(2, 3).unwrap() {
        for x in PGroupType::all_up_to(2, 4).unwrap() {
            let c = CokernelClass::from_exponents(2, 5, x.lambda().parts());
            assert_eq!(sur_count(&c, &g).unwrap(), BigUint::from(count_surjections(&x, &g).unwrap()), "{x:?} -> {g:?}");
        }
    }
}

#[test]
fn sin_sums_are_half_the_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for moduli in [vec![2u64], vec![4], vec![8, 4], vec![32], vec![2, 2, 2, 2, 2], vec![3, 9], vec![27], vec![5, 5], vec![4, 2, 2]] {
        let ambient = FiniteAbelian::new(moduli.clone(), 64).unwrap();
        for h in ambient.subgroups().into_iter().filter(|h| h.order() > 1 && h.order() <= 32) {
            let choices: Vec<u64> = (2..=*moduli.iter().max().unwrap()).filter(|m| moduli.iter().any(|q| q % m == 0)).collect();
            let mut tried = 0;
            let mut attempts = 0;
            while tried < 100 {
                attempts += 1;
                assert!(attempts < 100_000, "no non-constant map found on {:?}", h.elements());
                let m = choices[rng.gen_range(0..choices.len())];
                let coefficients: Vec<u64> = moduli
                    .iter()
                    .map(|&q| {
                        let step = m / num_integer_gcd(m, q);
                        step * rng.gen_range(0..m)
                    })
                    .collect();
                let l = AffineMap {
                    modulus: m,
                    constant: rng.gen_range(0..m),
                    coefficients,
                };
                match sin_sum_check(&h, &l) {
                    Ok(s) => {
                        assert!((s - h.order() as f64 / 2.0).abs() < 1e-10);
                        tried += 1;
                    }
                    Err(OracleError::ConstantMap) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

fn num_integer_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_integer_gcd(b, a % b)
    }
}

#[test]
fn main_term_increases_to_subgroup_count() {
    let z2 = PGroupType::of(2, &[1]);
    let spec = PairingSpec::new(Flavor::U1B1, &z2, 1).unwrap();
    let mut prev = 0.0;
    for (n, expected) in [(1usize, 1.5), (2, 1.75), (3, 1.875)] {
        let count = trivial_part_count(&spec, n).unwrap();
        assert_eq!(BigUint::from(count), trivial_part_census(&spec, n).unwrap());
        let ratio = count as f64 / 2f64.powi(n as i32);
        assert_eq!(ratio, expected);
        assert!(ratio >= prev && ratio < 2.0);
        prev = ratio;
    }
}

#[test]
fn census_matches_enumeration_for_small_groups() {
    for parts in [&[1u32][..], &[1, 1], &[2], &[1, 1, 1]] {
        let g = PGroupType::of(2, parts);
        for flavor in Flavor::ALL {
            let spec = PairingSpec::new(flavor, &g, g.log_exponent()).unwrap();
            for n in 1..=3usize {
                if (spec.square_order() as u64).pow(n as u32) > 1 << 20 {
                    continue;
                }
                let census = trivial_part_census(&spec, n).unwrap();
                assert_eq!(BigUint::from(trivial_part_count(&spec, n).unwrap()), census, "{flavor:?} {parts:?} {n}");
            }
        }
    }
    let z3 = PGroupType::of(3, &[1]);
    for flavor in Flavor::ALL {
        let spec = PairingSpec::new(flavor, &z3, 1).unwrap();
        for n in 1..=3 {
            assert_eq!(BigUint::from(trivial_part_count(&spec, n).unwrap()), trivial_part_census(&spec, n).unwrap());
        }
    }
}

#[test]
fn graph_coset_criterion_reproduces_trivial_part() {
    let z2 = PGroupType::of(2, &[1]);
    let spec = PairingSpec::new(Flavor::U4B4, &z2, 1).unwrap();
    let size = spec.square_order();
    for n in 1..=3u32 {
        let mut members = 0;
        for code in 0..size.pow(n) {
            let tuple: Vec<usize> = (0..n).map(|k| code / size.pow(k) % size).collect();
            let direct = is_trivial_tuple(&spec, &tuple);
            assert_eq!(graph_coset_criterion(&spec, &tuple).unwrap(), direct, "{tuple:?}");
            members += direct as u64;
        }
        assert_eq!(members, trivial_part_count(&spec, n as usize).unwrap());
        let ratio = trivial_part_census(&spec, n as usize).unwrap().to_f64().unwrap() / 2f64.powi(n as i32 + 1);
        assert!(ratio <= 2.0);
    }
}
