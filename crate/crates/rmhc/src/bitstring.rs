//! Fixed-length binary genomes.

use std::fmt;

use crate::rng::RngStream;

/// A candidate solution: an ordered, fixed-length sequence of bits.
///
/// Experiments stay below a few thousand bits, so bits are stored as plain
/// bools rather than packed words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    /// Builds a genome from explicit bit values.
    ///
    /// Panics if `bits` is empty: a genome has at least one gene.
    pub fn from_bits(bits: Vec<bool>) -> Self {
        assert!(!bits.is_empty(), "a BitString needs at least one bit");
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_bits(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        Self::from_bits(vec![true; n])
    }

    /// Draws each bit independently with probability 1/2.
    ///
    /// Panics if `n` is zero.
    pub fn random(n: usize, rng: &mut RngStream) -> Self {
        assert!(n >= 1, "a BitString needs at least one bit");
        Self {
            bits: (0..n).map(|_| rng.bit()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is at least 1 by construction
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().filter(|&&b| b).count() as u64
    }

    pub fn is_all_ones(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    /// Returns a copy differing from `self` exactly at position `i`.
    ///
    /// Panics if `i` is out of range.
    pub fn flipped(&self, i: usize) -> Self {
        assert!(
            i < self.bits.len(),
            "flip index {i} out of range for length {}",
            self.bits.len()
        );
        let mut bits = self.bits.clone();
        bits[i] = !bits[i];
        Self { bits }
    }

    /// Number of positions at which `self` and `other` differ.
    pub fn hamming_distance(&self, other: &Self) -> u64 {
        assert_eq!(self.len(), other.len(), "length mismatch");
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count() as u64
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err("empty bit string".to_owned());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid bit character {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_bits)
    }
}
