//! Shared fixtures for the benchmark targets.

use rand::Rng;

use pscrd_core::{rng_from_seed, Distribution};

/// A reproducible random distribution of the given size.
pub fn random_distribution(n: usize, seed: u64) -> Distribution {
    let mut rng = rng_from_seed(seed);
    Distribution::new((0..n).map(|_| rng.gen_range(0.0f64..1e4)).collect())
        .expect("generated values are valid")
}
