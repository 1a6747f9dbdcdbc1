//! Runs an expanded plan, optionally in parallel.

use std::time::Instant;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::plan::{ExperimentPlan, PlannedRun};
use super::HarnessError;
use crate::climb::{self, RunOutcome, SelectionPolicy};
use crate::problem::ProblemKind;

/// Flat result row for one run; mirrors the records CSV schema. A failed
/// run (misconfigured cell) keeps zeroed outcome fields and carries the
/// error note, which is not persisted to CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: u64,
    pub seed: u64,
    pub policy: SelectionPolicy,
    pub problem: ProblemKind,
    pub dim: usize,
    /// Royal Road block size; `None` (serialized as 0) for OneMax.
    pub block_size: Option<usize>,
    pub noise_sigma: f64,
    pub resample: u32,
    pub budget: u64,
    pub solved: bool,
    pub evals_used: u64,
    pub generations: u64,
    pub wall_ns: u64,
    pub error: Option<String>,
}

impl RunRecord {
    fn from_run(planned: &PlannedRun, outcome: Result<RunOutcome, String>, wall_ns: u64) -> Self {
        let cfg = &planned.config;
        let (outcome, error) = match outcome {
            Ok(o) => (o, None),
            Err(e) => (
                RunOutcome {
                    evals_used: 0,
                    solved: false,
                    generations: 0,
                    final_true_fitness: 0,
                },
                Some(e),
            ),
        };
        Self {
            run_id: planned.run_id,
            seed: cfg.seed,
            policy: cfg.policy,
            problem: cfg.problem.kind(),
            dim: cfg.dim,
            block_size: cfg.problem.block_size(),
            noise_sigma: cfg.problem.noise_sigma(),
            resample: cfg.resample,
            budget: cfg.budget,
            solved: outcome.solved,
            evals_used: outcome.evals_used,
            generations: outcome.generations,
            wall_ns,
            error,
        }
    }
}

/// Executes every run of the plan and returns one record per run, ordered
/// by run id (cell then repetition) regardless of completion order.
///
/// Results are identical for any parallelism level except for the
/// wall-clock field. Individual misconfigured runs become failed records;
/// the sweep continues.
pub fn execute(plan: &ExperimentPlan, parallelism: usize) -> Result<Vec<RunRecord>, HarnessError> {
    if parallelism == 0 {
        return Err(HarnessError::InvalidParallelism);
    }
    let runs = plan.expand()?;
    Ok(run_all(&runs, parallelism))
}

fn run_one(planned: &PlannedRun) -> RunRecord {
    let start = Instant::now();
    let outcome = climb::run(&planned.config).map_err(|e| e.to_string());
    let wall_ns = start.elapsed().as_nanos().min(u64::MAX as u128) as u64;
    RunRecord::from_run(planned, outcome, wall_ns)
}

#[cfg(feature = "parallel")]
fn run_all(runs: &[PlannedRun], parallelism: usize) -> Vec<RunRecord> {
    if parallelism == 1 {
        return runs.iter().map(run_one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build();
    match pool {
        Ok(pool) => pool.install(|| runs.par_iter().map(run_one).collect()),
        // Pool creation can only fail on resource exhaustion; fall back
        // rather than lose the sweep.
        Err(_) => runs.iter().map(run_one).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_all(runs: &[PlannedRun], _parallelism: usize) -> Vec<RunRecord> {
    runs.iter().map(run_one).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::plan::{GridEntry, PLAN_SCHEMA_VERSION};

    fn plan() -> ExperimentPlan {
        ExperimentPlan {
            schema_version: PLAN_SCHEMA_VERSION,
            repetitions: 5,
            master_seed: 11,
            budget_factor: 1000,
            grid: vec![GridEntry {
                problem: ProblemKind::OneMax,
                dims: vec![20, 40],
                block_sizes: None,
                sigmas: vec![0.0, 1.0],
                policies: vec![SelectionPolicy::Uniform, SelectionPolicy::Bandit],
                resamples: vec![1],
            }],
        }
    }

    fn strip_wall(records: &[RunRecord]) -> Vec<RunRecord> {
        records
            .iter()
            .cloned()
            .map(|mut r| {
                r.wall_ns = 0;
                r
            })
            .collect()
    }

    #[test]
    fn one_record_per_planned_run_in_plan_order() {
        let plan = plan();
        let records = execute(&plan, 1).unwrap();
        assert_eq!(records.len() as u64, plan.cell_count() * 5);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.run_id, i as u64);
            assert!(r.error.is_none());
        }
    }

    #[test]
    fn parallel_and_serial_execution_agree() {
        let plan = plan();
        let serial = execute(&plan, 1).unwrap();
        let parallel = execute(&plan, 8).unwrap();
        assert_eq!(strip_wall(&serial), strip_wall(&parallel));
    }

    #[test]
    fn zero_parallelism_is_rejected() {
        assert!(matches!(
            execute(&plan(), 0),
            Err(HarnessError::InvalidParallelism)
        ));
    }

    #[test]
    fn misconfigured_cells_fail_without_aborting_the_sweep() {
        let plan = ExperimentPlan {
            schema_version: PLAN_SCHEMA_VERSION,
            repetitions: 2,
            master_seed: 3,
            budget_factor: 100,
            grid: vec![GridEntry {
                problem: ProblemKind::RoyalRoad,
                // 50 is not a multiple of 8: that cell must fail.
                dims: vec![50, 64],
                block_sizes: Some(vec![8]),
                sigmas: vec![0.0],
                policies: vec![SelectionPolicy::Bandit],
                resamples: vec![1],
            }],
        };
        let records = execute(&plan, 1).unwrap();
        assert_eq!(records.len(), 4);
        let (bad, good): (Vec<_>, Vec<_>) = records.iter().partition(|r| r.dim == 50);
        for r in bad {
            assert!(r.error.as_ref().unwrap().contains("not a multiple"));
            assert!(!r.solved);
            assert_eq!(r.evals_used, 0);
        }
        for r in good {
            assert!(r.error.is_none());
        }
    }
}
