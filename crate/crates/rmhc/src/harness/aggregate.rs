//! Per-configuration aggregation of run records.

use std::collections::BTreeMap;

use super::execute::RunRecord;
use super::HarnessError;
use crate::climb::SelectionPolicy;
use crate::problem::ProblemKind;

/// Mean ± standard error of one configuration across its repetitions.
///
/// `mean_evals` and `stderr_evals` are computed over *solved* runs only;
/// runs that exhausted their budget show up in `solve_rate`. A
/// configuration with no solved runs reports NaN means.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub policy: SelectionPolicy,
    pub problem: ProblemKind,
    pub dim: usize,
    pub block_size: Option<usize>,
    pub noise_sigma: f64,
    pub resample: u32,
    pub budget: u64,
    pub mean_evals: f64,
    /// Sample standard deviation of solved-run evaluations divided by the
    /// square root of the solved-run count; 0 for a single sample.
    pub stderr_evals: f64,
    pub solve_rate: f64,
    pub mean_evals_per_dim: f64,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    problem: ProblemKind,
    block_size: Option<usize>,
    dim: usize,
    sigma_bits: u64,
    policy: SelectionPolicy,
    resample: u32,
    budget: u64,
}

impl Key {
    fn of(r: &RunRecord) -> Self {
        Self {
            problem: r.problem,
            block_size: r.block_size,
            dim: r.dim,
            sigma_bits: r.noise_sigma.to_bits(),
            policy: r.policy,
            resample: r.resample,
            budget: r.budget,
        }
    }
}

/// Groups records by configuration and reduces each group to one row.
/// Rows come out in a fixed order (problem, block, dimension, sigma,
/// policy, resample).
pub fn aggregate(records: &[RunRecord]) -> Result<Vec<AggregateRow>, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::EmptyRecords);
    }
    let mut groups: BTreeMap<Key, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(Key::of(r)).or_default().push(r);
    }
    Ok(groups
        .into_iter()
        .map(|(key, group)| {
            let solved: Vec<f64> = group
                .iter()
                .filter(|r| r.solved)
                .map(|r| r.evals_used as f64)
                .collect();
            let mean = mean(&solved);
            AggregateRow {
                policy: key.policy,
                problem: key.problem,
                dim: key.dim,
                block_size: key.block_size,
                noise_sigma: f64::from_bits(key.sigma_bits),
                resample: key.resample,
                budget: key.budget,
                mean_evals: mean,
                stderr_evals: stderr(&solved, mean),
                solve_rate: solved.len() as f64 / group.len() as f64,
                mean_evals_per_dim: mean / key.dim as f64,
            }
        })
        .collect())
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn stderr(xs: &[f64], mean: f64) -> f64 {
    match xs.len() {
        0 => f64::NAN,
        1 => 0.0,
        n => {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(evals: u64, solved: bool) -> RunRecord {
        RunRecord {
            run_id: 0,
            seed: 0,
            policy: SelectionPolicy::Uniform,
            problem: ProblemKind::OneMax,
            dim: 10,
            block_size: None,
            noise_sigma: 0.0,
            resample: 1,
            budget: 10_000,
            solved,
            evals_used: evals,
            generations: evals.saturating_sub(1),
            wall_ns: 0,
            error: None,
        }
    }

    #[test]
    fn mean_and_stderr_of_a_small_group() {
        let records: Vec<RunRecord> = [1, 2, 3].map(|e| record(e, true)).to_vec();
        let rows = aggregate(&records).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.mean_evals, 2.0);
        assert!((row.stderr_evals - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(row.solve_rate, 1.0);
        assert!((row.mean_evals_per_dim - 0.2).abs() < 1e-12);
    }

    #[test]
    fn single_record_has_zero_stderr() {
        let rows = aggregate(&[record(7, true)]).unwrap();
        assert_eq!(rows[0].stderr_evals, 0.0);
        assert_eq!(rows[0].mean_evals, 7.0);
    }

    #[test]
    fn unsolved_runs_lower_the_rate_but_not_the_mean() {
        let records = vec![
            record(10, true),
            record(20, true),
            record(10_000, false),
            record(10_000, false),
        ];
        let rows = aggregate(&records).unwrap();
        assert_eq!(rows[0].solve_rate, 0.5);
        assert_eq!(rows[0].mean_evals, 15.0);
    }

    #[test]
    fn fully_unsolved_groups_report_nan_means() {
        let rows = aggregate(&[record(10_000, false)]).unwrap();
        assert!(rows[0].mean_evals.is_nan());
        assert_eq!(rows[0].solve_rate, 0.0);
    }

    #[test]
    fn groups_split_by_configuration() {
        let mut a = record(5, true);
        let mut b = record(9, true);
        b.dim = 20;
        a.run_id = 0;
        b.run_id = 1;
        let rows = aggregate(&[a, b]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].dim, 10);
        assert_eq!(rows[1].dim, 20);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(aggregate(&[]), Err(HarnessError::EmptyRecords)));
    }

    #[test]
    fn constant_series_has_zero_spread() {
        let records: Vec<RunRecord> = (0..10).map(|_| record(42, true)).collect();
        let rows = aggregate(&records).unwrap();
        assert_eq!(rows[0].mean_evals, 42.0);
        assert_eq!(rows[0].stderr_evals, 0.0);
    }
}
