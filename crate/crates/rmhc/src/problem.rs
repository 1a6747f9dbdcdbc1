//! Benchmark fitness functions and noisy evaluation.
//!
//! Two binary benchmarks are supported:
//!
//! * **OneMax** — fitness is the number of ones.
//! * **Royal Road (R1)** — the genome is split into consecutive blocks of
//!   `block_size` bits; each fully-set block contributes `block_size` to the
//!   fitness, partially-set blocks contribute nothing. With `block_size = 1`
//!   this degenerates to OneMax.
//!
//! Both have optimum fitness `n` (the all-ones string). Noisy evaluation
//! adds `sigma * g` with `g` a fresh standard Gaussian draw; `sigma = 0`
//! selects a deterministic path that consumes no Gaussian draw.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitstring::BitString;
use crate::rng::RngStream;

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("block size must be at least 1")]
    ZeroBlockSize,
    #[error("dimension {dim} is not a multiple of block size {block_size}")]
    DimensionNotDivisible { dim: usize, block_size: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("noise sigma must be finite and nonnegative, got {0}")]
    InvalidSigma(f64),
}

/// Which benchmark family a problem belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    OneMax,
    RoyalRoad,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::OneMax => "onemax",
            ProblemKind::RoyalRoad => "royalroad",
        })
    }
}

impl FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "onemax" => Ok(ProblemKind::OneMax),
            "royalroad" => Ok(ProblemKind::RoyalRoad),
            other => Err(format!(
                "unknown problem {other:?} (expected \"onemax\" or \"royalroad\")"
            )),
        }
    }
}

/// A fitness function plus its noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    kind: ProblemKind,
    block_size: Option<usize>,
    noise_sigma: f64,
}

impl ProblemSpec {
    pub fn one_max(noise_sigma: f64) -> Result<Self, ProblemError> {
        check_sigma(noise_sigma)?;
        Ok(Self {
            kind: ProblemKind::OneMax,
            block_size: None,
            noise_sigma,
        })
    }

    pub fn royal_road(block_size: usize, noise_sigma: f64) -> Result<Self, ProblemError> {
        if block_size == 0 {
            return Err(ProblemError::ZeroBlockSize);
        }
        check_sigma(noise_sigma)?;
        Ok(Self {
            kind: ProblemKind::RoyalRoad,
            block_size: Some(block_size),
            noise_sigma,
        })
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Block size for Royal Road problems, `None` for OneMax.
    pub fn block_size(&self) -> Option<usize> {
        self.block_size
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma
    }

    pub fn is_noisy(&self) -> bool {
        self.noise_sigma > 0.0
    }

    /// Checks that genomes of length `dim` are valid for this problem.
    pub fn check_dimension(&self, dim: usize) -> Result<(), ProblemError> {
        if dim == 0 {
            return Err(ProblemError::ZeroDimension);
        }
        if let Some(b) = self.block_size {
            if dim % b != 0 {
                return Err(ProblemError::DimensionNotDivisible { dim, block_size: b });
            }
        }
        Ok(())
    }

    /// Noise-free fitness. Measurement-only: never touches an [`EvalCounter`].
    pub fn true_fitness(&self, s: &BitString) -> u64 {
        match self.kind {
            ProblemKind::OneMax => onemax_fitness(s),
            ProblemKind::RoyalRoad => royal_road_fitness(s, self.block_size.unwrap()),
        }
    }

    /// Fitness of the all-ones optimum for genomes of length `dim`.
    pub fn optimum(&self, dim: usize) -> u64 {
        debug_assert!(self.check_dimension(dim).is_ok());
        dim as u64
    }

    /// One counted fitness evaluation: true fitness plus `sigma * g` with a
    /// fresh standard Gaussian `g`. When `sigma` is zero no draw is consumed.
    pub fn evaluate(&self, s: &BitString, rng: &mut RngStream, counter: &mut EvalCounter) -> f64 {
        counter.increment();
        let fit = self.true_fitness(s) as f64;
        if self.noise_sigma > 0.0 {
            fit + self.noise_sigma * rng.standard_normal()
        } else {
            fit
        }
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.block_size {
            Some(b) => write!(f, "{} (block {b}, sigma {})", self.kind, self.noise_sigma),
            None => write!(f, "{} (sigma {})", self.kind, self.noise_sigma),
        }
    }
}

fn check_sigma(sigma: f64) -> Result<(), ProblemError> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(ProblemError::InvalidSigma(sigma));
    }
    Ok(())
}

/// Number of ones in the genome.
pub fn onemax_fitness(s: &BitString) -> u64 {
    s.count_ones()
}

/// Royal Road R1 fitness: each contiguous block of `block_size` bits that is
/// entirely ones contributes `block_size`; anything less contributes nothing.
///
/// Panics unless `block_size >= 1` and the length is a multiple of it.
pub fn royal_road_fitness(s: &BitString, block_size: usize) -> u64 {
    assert!(block_size >= 1, "block size must be at least 1");
    assert!(
        s.len() % block_size == 0,
        "length {} is not a multiple of block size {block_size}",
        s.len()
    );
    let mut total = 0u64;
    for block in 0..s.len() / block_size {
        let start = block * block_size;
        if (start..start + block_size).all(|i| s.get(i)) {
            total += block_size as u64;
        }
    }
    total
}

/// Counts fitness evaluations. Incremented exactly once per call to
/// [`ProblemSpec::evaluate`]; the noise-free oracle never increments it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounter {
    count: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    fn increment(&mut self) {
        self.count += 1;
    }
}
