//! Seeded random number stream.
//!
//! Every run owns exactly one `RngStream`; an identical seed reproduces the
//! identical sequence of uniform and Gaussian draws within one build.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Deterministic random source backing all stochastic decisions of a run.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Standard Gaussian draw.
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Uniform index on `{0, …, n-1}`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n >= 1, "index() requires a nonempty range");
        self.rng.random_range(0..n)
    }

    /// Fair coin flip.
    pub fn bit(&mut self) -> bool {
        self.rng.random()
    }
}
