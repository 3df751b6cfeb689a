use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::framework::{Argument, Framework};

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed splitting rule: fold each label into the parent with splitmix64.
///
/// `derive_seed(s, &[a, b]) == splitmix64(splitmix64(splitmix64(s) ^ a) ^ b)`.
pub fn derive_seed(parent: u64, labels: &[u64]) -> u64 {
    labels.iter().fold(splitmix64(parent), |acc, &l| splitmix64(acc ^ l))
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Directed Erdős–Rényi framework on arguments `0..n`. Every ordered pair,
/// self-attacks included, is an attack with probability `p`.
pub fn generate_random_af<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Framework {
    generate_random_af_with(n, p, true, rng)
}

/// As [`generate_random_af`], but pairs `(a, a)` are only drawn when
/// `self_attacks` is set.
pub fn generate_random_af_with<R: Rng + ?Sized>(n: usize, p: f64, self_attacks: bool, rng: &mut R) -> Framework {
    let n = n as Argument;
    let mut attacks = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if (self_attacks || a != b) && rng.random_bool(p) {
                attacks.push((a, b));
            }
        }
    }
    Framework::new(0..n, attacks).expect("endpoints lie in 0..n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_argument_shapes() {
        let mut rng = rng_from(3);
        for _ in 0..50 {
            let f = generate_random_af(1, 0.5, &mut rng);
            assert_eq!(f.arguments(), &[0]);
            assert!(f.attacks().len() <= 1);
        }
    }

    #[test]
    fn same_seed_same_framework() {
        let a = generate_random_af(6, 0.15, &mut rng_from(42));
        let b = generate_random_af(6, 0.15, &mut rng_from(42));
        assert_eq!(a, b);
    }

    #[test]
    fn mean_edge_count() {
        let mut rng = rng_from(7);
        let draws = 10_000;
        let total: usize = (0..draws)
            .map(|_| generate_random_af(10, 0.1, &mut rng).attacks().len())
            .sum();
        let mean = total as f64 / draws as f64;
        // p * n^2 = 10
        assert!((mean - 10.0).abs() <= 0.5, "mean edge count {mean}");
    }

    #[test]
    fn loopless_variant() {
        let mut rng = rng_from(8);
        for _ in 0..200 {
            let f = generate_random_af_with(6, 0.3, false, &mut rng);
            assert!(f.attacks().iter().all(|(a, b)| a != b));
        }
    }

    #[test]
    fn derived_seeds_differ() {
        assert_eq!(derive_seed(1, &[2, 3]), splitmix64(splitmix64(splitmix64(1) ^ 2) ^ 3));
        assert_ne!(derive_seed(1, &[2, 3]), derive_seed(1, &[3, 2]));
    }
}
