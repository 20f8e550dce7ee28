use cokernel_core::linalg::{cokernel_class, rank_mod_p, smith_normal_form, ModMatrix, Symmetry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: u64) -> ModMatrix {
    let entries = (0..n * n)
        .map(|_| match rng.gen_range(0..4) {
            0 => 0,
            1 => m / 2,
            _ => rng.gen_range(0..m),
        })
        .collect();
    ModMatrix::new(n, m, entries, Symmetry::General).unwrap()
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize, p: u64, m: u64) -> ModMatrix {
    loop {
        let entries = (0..n * n).map(|_| rng.gen_range(0..m)).collect();
        let u = ModMatrix::new(n, m, entries, Symmetry::General).unwrap();
        if rank_mod_p(&u, p).unwrap() == n {
            return u;
        }
    }
}

fn kernel_size(a: &ModMatrix) -> u64 {
    let n = a.n();
    let m = a.modulus();
    let total = m.pow(n as u32);
    let mut count = 0;
    let mut x = vec![0u64; n];
    for idx in 0..total {
        let mut t = idx;
        for xi in x.iter_mut() {
            *xi = t % m;
            t /= m;
        }
        let zero = (0..n).all(|i| (0..n).map(|j| a.get(i, j) * x[j]).sum::<u64>() % m == 0);
        if zero {
            count += 1;
        }
    }
    count
}

#[test]
fn kernel_count_matches_smith_exponents() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..10_000 {
        let a = random_matrix(&mut rng, 3, 8);
        let exps = smith_normal_form(&a).unwrap();
        let predicted: u64 = exps.iter().map(|&v| 2u64.pow(v)).product();
        assert_eq!(kernel_size(&a), predicted, "{a:?}");
    }
}

#[test]
fn rank_plus_positive_exponents_is_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for (p, d) in [(2u64, 3u32), (3, 2), (5, 1), (2, 1)] {
        let m = p.pow(d);
        for _ in 0..2_500 {
            let n = rng.gen_range(1..6);
            let a = random_matrix(&mut rng, n, m);
            let exps = smith_normal_form(&a).unwrap();
            let positive = exps.iter().filter(|&&v| v >= 1).count();
            assert_eq!(rank_mod_p(&a, p).unwrap() + positive, n);
        }
    }
}

#[test]
fn class_invariant_under_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for (p, d) in [(2u64, 3u32), (3, 2), (2, 2)] {
        let m = p.pow(d);
        for _ in 0..400 {
            let n = rng.gen_range(2..6);
            let a = random_matrix(&mut rng, n, m);
            let u = random_invertible(&mut rng, n, p, m);
            let v = random_invertible(&mut rng, n, p, m);
            let b = a.multiply_both(&u, &v).unwrap();
            assert_eq!(cokernel_class(&a, p, d).unwrap(), cokernel_class(&b, p, d).unwrap());
        }
    }
}

#[test]
fn alternating_divisors_pair_up() {
    let m = 4u64;
    let n = 4;
    let slots = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for code in 0..m.pow(slots.len() as u32) {
        let mut entries = vec![0u64; n * n];
        let mut t = code;
        for &(i, j) in &slots {
            let x = t % m;
            t /= m;
            entries[i * n + j] = x;
            entries[j * n + i] = (m - x) % m;
        }
        let a = ModMatrix::new(n, m, entries, Symmetry::Alternating).unwrap();
        let c = cokernel_class(&a, 2, 2).unwrap();
        for (part, mult) in c.lambda().multiplicities() {
            if part < 2 {
                assert_eq!(mult % 2, 0, "{a:?}");
            }
        }
        // The saturated parts pair up too, since n is even.
        assert_eq!(c.lambda().len() % 2, 0);
    }
}
