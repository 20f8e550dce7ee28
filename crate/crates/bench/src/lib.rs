//! Shared fixtures for the criterion benches.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dense `n × n` residues mod `m`, row-major, from a fixed seed.
pub fn dense_residues(n: usize, m: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n * n).map(|_| rng.gen_range(0..m)).collect()
}
