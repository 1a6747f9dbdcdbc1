//! Analytic reference values used by tests and spot-checks.
//!
//! These are independent of the climber implementations: they derive
//! expectations from first principles (geometric waiting times, Gaussian
//! order statistics) so that simulation results can be checked against
//! closed forms.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("sigma must be positive; with sigma = 0 acceptance is deterministic")]
    DegenerateSigma,
    #[error("unknown oracle {0:?}")]
    UnknownOracle(String),
    #[error("oracle {name} expects {expected} argument(s), got {got}")]
    WrongArity {
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("oracle {name} argument {index} must be {requirement}, got {value}")]
    BadArgument {
        name: &'static str,
        index: usize,
        requirement: &'static str,
        value: f64,
    },
}

/// A named analytic value, as printed by the `oracle` CLI subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub description: String,
}

/// Expected number of fitness evaluations for the uniform-selection
/// noise-free climber to solve an `n`-bit OneMax from a random start.
///
/// From a state with `k` zeros a uniformly chosen single-bit flip improves
/// with probability `k/n` (flipping a one is rejected), so the expected
/// number of generations from `k0` initial zeros is `sum_{k=1..k0} n/k`.
/// Averaging over `k0 ~ Binomial(n, 1/2)` and adding the initial
/// evaluation gives the expectation. The binomial weights are accumulated
/// in log space so the sum stays exact for `n` up to 10^4.
pub fn expected_evals_uniform_onemax(n: usize) -> f64 {
    assert!(n >= 1, "dimension must be at least 1");
    let ln2 = std::f64::consts::LN_2;
    let mut pmf = vec![0.0f64; n + 1];
    let mut ln_pmf = -(n as f64) * ln2; // ln P(K0 = 0)
    pmf[0] = ln_pmf.exp();
    for k in 0..n {
        ln_pmf += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
        pmf[k + 1] = ln_pmf.exp();
    }
    // E[generations] = sum_{k>=1} (n/k) * P(K0 >= k), accumulated from the
    // tail so the survival probabilities are exact partial sums.
    let mut survival = 0.0;
    let mut generations = 0.0;
    for k in (1..=n).rev() {
        survival += pmf[k];
        generations += n as f64 / k as f64 * survival;
    }
    1.0 + generations
}

/// Probability that `r` noisy samples of a genome whose true fitness is
/// `gap` higher average at least as high as `r` fresh samples of the
/// incumbent, with i.i.d. Gaussian noise of standard deviation `sigma` and
/// no stored incumbent statistics.
///
/// The difference of the two sample means is Gaussian with standard
/// deviation `sigma * sqrt(2/r)`, so the probability is
/// `Phi(gap * sqrt(r) / (sigma * sqrt(2)))`.
pub fn true_accept_probability(gap: f64, sigma: f64, r: u32) -> Result<f64, OracleError> {
    assert!(r >= 1, "resample count must be at least 1");
    if sigma <= 0.0 {
        return Err(OracleError::DegenerateSigma);
    }
    Ok(std_normal_cdf(
        gap * (r as f64).sqrt() / (sigma * std::f64::consts::SQRT_2),
    ))
}

/// Standard Gaussian CDF via the complementary error function.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Looks up an oracle by CLI name and evaluates it.
///
/// Names: `expected-evals-uniform-onemax <n>` and
/// `true-accept-probability <gap> <sigma> <r>`.
pub fn oracle_by_name(name: &str, args: &[f64]) -> Result<OracleResult, OracleError> {
    match name {
        "expected-evals-uniform-onemax" => {
            let name = "expected-evals-uniform-onemax";
            expect_arity(name, args, 1)?;
            let n = positive_integer(name, 0, args[0])?;
            let value = expected_evals_uniform_onemax(n as usize);
            Ok(OracleResult {
                value,
                description: format!(
                    "expected evaluations of uniform noise-free RMHC on {n}-bit OneMax \
                     (binomial mixture of coupon-collector sums)"
                ),
            })
        }
        "true-accept-probability" => {
            let name = "true-accept-probability";
            expect_arity(name, args, 3)?;
            let (gap, sigma) = (args[0], args[1]);
            let r = positive_integer(name, 2, args[2])?;
            if sigma <= 0.0 {
                return Err(OracleError::DegenerateSigma);
            }
            let value = true_accept_probability(gap, sigma, r as u32)?;
            Ok(OracleResult {
                value,
                description: format!(
                    "probability that {r} noisy sample(s) of a genome {gap} better \
                     (sigma {sigma}) win a memoryless comparison: Phi(gap*sqrt(r)/(sigma*sqrt(2)))"
                ),
            })
        }
        other => Err(OracleError::UnknownOracle(other.to_owned())),
    }
}

fn expect_arity(name: &'static str, args: &[f64], expected: usize) -> Result<(), OracleError> {
    if args.len() != expected {
        return Err(OracleError::WrongArity {
            name,
            expected,
            got: args.len(),
        });
    }
    Ok(())
}

fn positive_integer(name: &'static str, index: usize, value: f64) -> Result<u64, OracleError> {
    if value.fract() != 0.0 || value < 1.0 || value > u64::MAX as f64 {
        return Err(OracleError::BadArgument {
            name,
            index,
            requirement: "a positive integer",
            value,
        });
    }
    Ok(value as u64)
}
