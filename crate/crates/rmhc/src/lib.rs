//! Random mutation hill-climbing (RMHC) on binary strings, with a
//! bandit-driven variant that learns which gene to mutate next.
//!
//! Two climbers are provided:
//!
//! * a noise-free loop that stores the incumbent's fitness and evaluates
//!   each offspring exactly once, and
//! * a noisy loop that combats evaluation noise by resampling both genomes
//!   every generation and folding incumbent samples into a running average.
//!
//! Both loops select the gene to flip either uniformly at random (classic
//! RMHC) or through an array of per-gene two-armed bandits whose urgency
//! score inverts the usual UCB exploitation term: genes whose flips have
//! been observed to help are left alone, genes that hurt or are unexplored
//! get flipped.
//!
//! The [`harness`] module plans seeded experiment sweeps over the OneMax
//! and Royal Road benchmarks, executes them (in parallel when the
//! `parallel` feature is enabled), aggregates mean ± standard error, and
//! renders deterministic SVG charts.
//!
//! ```
//! use rmhc::{climb, ProblemSpec, RunConfig, SelectionPolicy};
//!
//! let problem = ProblemSpec::one_max(0.0).unwrap();
//! let cfg = RunConfig::noise_free(problem, 64, SelectionPolicy::Bandit, 64_000, 7);
//! let outcome = climb::run(&cfg).unwrap();
//! assert!(outcome.solved);
//! ```

pub mod bandit;
pub mod bitstring;
pub mod climb;
pub mod harness;
pub mod oracle;
pub mod problem;
pub mod rng;

pub use bandit::{ArmStats, GeneBandit, GeneBanditArray};
pub use bitstring::BitString;
pub use climb::{
    uniform_select, ClimbError, ClimbResult, GenerationTrace, RunConfig, RunOutcome,
    SelectionPolicy,
};
pub use oracle::{expected_evals_uniform_onemax, true_accept_probability, OracleResult};
pub use problem::{
    onemax_fitness, royal_road_fitness, EvalCounter, ProblemError, ProblemKind, ProblemSpec,
};
pub use rng::RngStream;
