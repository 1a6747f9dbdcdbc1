//! Plan files and their expansion into concrete run configurations.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::climb::{RunConfig, SelectionPolicy};
use crate::problem::{ProblemKind, ProblemSpec};

pub const PLAN_SCHEMA_VERSION: u32 = 1;

/// One sweep description: a grid of configurations, how often each cell is
/// repeated, and the master seed every per-run seed is derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub schema_version: u32,
    pub repetitions: u32,
    pub master_seed: u64,
    /// Evaluation budget per run is `budget_factor * dimension`.
    pub budget_factor: u64,
    pub grid: Vec<GridEntry>,
}

/// One grid block; expands to the cartesian product of its lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridEntry {
    pub problem: ProblemKind,
    pub dims: Vec<usize>,
    /// Royal Road block sizes; required there, rejected for OneMax.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_sizes: Option<Vec<usize>>,
    pub sigmas: Vec<f64>,
    pub policies: Vec<SelectionPolicy>,
    pub resamples: Vec<u32>,
}

/// A fully specified run: its position in the plan plus the config.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedRun {
    pub run_id: u64,
    pub cell: u64,
    pub repetition: u64,
    pub config: RunConfig,
}

impl ExperimentPlan {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let plan: ExperimentPlan = toml::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn to_toml_string(&self) -> Result<String, HarnessError> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        Ok(std::fs::write(path, self.to_toml_string()?)?)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.schema_version != PLAN_SCHEMA_VERSION {
            return Err(HarnessError::UnsupportedSchemaVersion(self.schema_version));
        }
        if self.repetitions == 0 {
            return Err(HarnessError::ZeroRepetitions);
        }
        if self.budget_factor == 0 {
            return Err(HarnessError::ZeroBudgetFactor);
        }
        if self.grid.is_empty() {
            return Err(HarnessError::EmptyGrid);
        }
        for (entry, g) in self.grid.iter().enumerate() {
            for (field, empty) in [
                ("dims", g.dims.is_empty()),
                ("sigmas", g.sigmas.is_empty()),
                ("policies", g.policies.is_empty()),
                ("resamples", g.resamples.is_empty()),
            ] {
                if empty {
                    return Err(HarnessError::EmptyGridField { entry, field });
                }
            }
            if g.dims.iter().any(|&d| d == 0) {
                return Err(HarnessError::ZeroDimension { entry });
            }
            if g.sigmas.iter().any(|&s| !s.is_finite() || s < 0.0) {
                let sigma = *g
                    .sigmas
                    .iter()
                    .find(|&&s| !s.is_finite() || s < 0.0)
                    .unwrap();
                return Err(HarnessError::InvalidSigma { entry, sigma });
            }
            if g.resamples.iter().any(|&r| r == 0) {
                return Err(HarnessError::ZeroResample { entry });
            }
            match (g.problem, &g.block_sizes) {
                (ProblemKind::OneMax, Some(b)) if !b.is_empty() => {
                    return Err(HarnessError::BlockSizesOnOneMax { entry });
                }
                (ProblemKind::RoyalRoad, None) => {
                    return Err(HarnessError::MissingBlockSizes { entry });
                }
                (ProblemKind::RoyalRoad, Some(b)) if b.is_empty() => {
                    return Err(HarnessError::MissingBlockSizes { entry });
                }
                (ProblemKind::RoyalRoad, Some(b)) if b.iter().any(|&x| x == 0) => {
                    return Err(HarnessError::ZeroBlockSize { entry });
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Number of grid cells (concrete configurations before repetition).
    pub fn cell_count(&self) -> u64 {
        self.grid
            .iter()
            .map(|g| {
                (g.dims.len()
                    * g.block_sizes.as_ref().map_or(1, Vec::len)
                    * g.sigmas.len()
                    * g.policies.len()
                    * g.resamples.len()) as u64
            })
            .sum()
    }

    /// Expands to one [`PlannedRun`] per (cell, repetition), in a fixed
    /// deterministic order with pairwise-distinct seeds.
    ///
    /// A Royal Road cell whose dimension is not a multiple of its block
    /// size still expands; execution marks those runs as failed.
    pub fn expand(&self) -> Result<Vec<PlannedRun>, HarnessError> {
        self.validate()?;
        let mut runs =
            Vec::with_capacity(self.cell_count() as usize * self.repetitions as usize);
        let mut cell = 0u64;
        let mut run_id = 0u64;
        for g in &self.grid {
            let blocks: Vec<Option<usize>> = match &g.block_sizes {
                Some(b) => b.iter().map(|&x| Some(x)).collect(),
                None => vec![None],
            };
            for &dim in &g.dims {
                for &block in &blocks {
                    for &sigma in &g.sigmas {
                        for &policy in &g.policies {
                            for &resample in &g.resamples {
                                for rep in 0..self.repetitions as u64 {
                                    let problem = match block {
                                        Some(b) => {
                                            // Block size >= 1 was validated above.
                                            ProblemSpec::royal_road(b, sigma)
                                                .expect("validated block size and sigma")
                                        }
                                        None => ProblemSpec::one_max(sigma)
                                            .expect("validated sigma"),
                                    };
                                    let config = RunConfig {
                                        problem,
                                        dim,
                                        policy,
                                        resample,
                                        budget: self.budget_factor * dim as u64,
                                        seed: mix_seed(self.master_seed, cell, rep),
                                        noisy_mode: sigma > 0.0,
                                        incumbent_memory: true,
                                    };
                                    runs.push(PlannedRun {
                                        run_id,
                                        cell,
                                        repetition: rep,
                                        config,
                                    });
                                    run_id += 1;
                                }
                                cell += 1;
                            }
                        }
                    }
                }
            }
        }
        Ok(runs)
    }
}

/// Derives a per-run seed from the master seed and the run's position.
///
/// `(cell, repetition)` is packed into one word and passed through a
/// splitmix64 finalizer, which is a bijection on u64; seeds are therefore
/// pairwise distinct within a plan as long as cell and repetition each fit
/// in 32 bits.
pub fn mix_seed(master_seed: u64, cell: u64, repetition: u64) -> u64 {
    assert!(cell <= u32::MAX as u64, "cell index exceeds 32 bits");
    assert!(repetition <= u32::MAX as u64, "repetition exceeds 32 bits");
    splitmix64(master_seed ^ splitmix64((cell << 32) | repetition))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
