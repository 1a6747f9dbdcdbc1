//! The hill-climbing engines.
//!
//! [`run_noise_free`] keeps the incumbent's stored fitness and evaluates
//! each offspring once per generation. [`run_noisy`] draws `r` fresh
//! samples of both the incumbent and the offspring every generation and
//! compares the offspring's sample mean against a running average that
//! folds all samples attributed to the incumbent since its acceptance:
//!
//! ```text
//! averageFitness = (bestFitSoFar * M + sum(x samples)) / (M + r)
//! accept  => bestFitSoFar = mean(y samples), M = r
//! reject  => bestFitSoFar = averageFitness,  M = M + r
//! ```
//!
//! Ties accept the offspring, so flat landscapes drift instead of
//! freezing. Gene selection is either uniform or bandit-driven; under the
//! bandit policy every generation's observed fitness change is recorded
//! whether or not the offspring was accepted.
//!
//! A run is *solved* the first time the incumbent's noise-free fitness
//! equals the optimum, checked through the non-counting oracle after every
//! generation; the check is measurement-only and invisible to the
//! algorithm.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bandit::GeneBanditArray;
use crate::bitstring::BitString;
use crate::problem::{EvalCounter, ProblemError, ProblemSpec};
use crate::rng::RngStream;

#[derive(Debug, Error, PartialEq)]
pub enum ClimbError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("noise-free run requires sigma = 0, got {0}")]
    NoisyFitnessInNoiseFreeRun(f64),
    #[error("config is flagged {expected} but the {called} runner was called")]
    ModeMismatch {
        expected: &'static str,
        called: &'static str,
    },
    #[error("resample count must be at least 1 in noisy mode")]
    ZeroResample,
    #[error("evaluation budget must be at least 1")]
    ZeroBudget,
    #[error("initial genome has {got} bits, config wants {want}")]
    InitialGenomeLength { got: usize, want: usize },
}

/// How the gene to mutate is chosen each generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionPolicy {
    /// Classic RMHC: a uniformly random gene.
    Uniform,
    /// The gene with maximal bandit urgency.
    Bandit,
}

impl fmt::Display for SelectionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionPolicy::Uniform => "uniform",
            SelectionPolicy::Bandit => "bandit",
        })
    }
}

impl FromStr for SelectionPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(SelectionPolicy::Uniform),
            "bandit" => Ok(SelectionPolicy::Bandit),
            other => Err(format!(
                "unknown policy {other:?} (expected \"uniform\" or \"bandit\")"
            )),
        }
    }
}

/// Uniform gene pick on `{0, …, n-1}`.
pub fn uniform_select(n: usize, rng: &mut RngStream) -> usize {
    rng.index(n)
}

/// Everything one run needs: problem, dimension, policy, sampling and
/// stopping parameters, and the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub dim: usize,
    pub policy: SelectionPolicy,
    /// Samples drawn of each genome per generation in noisy mode; ignored
    /// (treated as 1) in noise-free mode.
    pub resample: u32,
    /// Hard cap on counted fitness evaluations.
    pub budget: u64,
    pub seed: u64,
    /// Selects the noisy loop (resampling + incumbent statistics) instead
    /// of the noise-free loop.
    pub noisy_mode: bool,
    /// When false, the noisy loop compares bare sample means each
    /// generation instead of folding incumbent history (sensitivity
    /// toggle; the default true matches the resampling climber).
    pub incumbent_memory: bool,
}

impl RunConfig {
    pub fn noise_free(
        problem: ProblemSpec,
        dim: usize,
        policy: SelectionPolicy,
        budget: u64,
        seed: u64,
    ) -> Self {
        Self {
            problem,
            dim,
            policy,
            resample: 1,
            budget,
            seed,
            noisy_mode: false,
            incumbent_memory: true,
        }
    }

    pub fn noisy(
        problem: ProblemSpec,
        dim: usize,
        policy: SelectionPolicy,
        resample: u32,
        budget: u64,
        seed: u64,
    ) -> Self {
        Self {
            problem,
            dim,
            policy,
            resample,
            budget,
            seed,
            noisy_mode: true,
            incumbent_memory: true,
        }
    }

    pub fn memoryless(mut self) -> Self {
        self.incumbent_memory = false;
        self
    }

    pub fn validate(&self) -> Result<(), ClimbError> {
        self.problem.check_dimension(self.dim)?;
        if self.budget == 0 {
            return Err(ClimbError::ZeroBudget);
        }
        if self.noisy_mode {
            if self.resample == 0 {
                return Err(ClimbError::ZeroResample);
            }
        } else if self.problem.noise_sigma() != 0.0 {
            return Err(ClimbError::NoisyFitnessInNoiseFreeRun(
                self.problem.noise_sigma(),
            ));
        }
        Ok(())
    }
}

/// Result summary of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOutcome {
    /// Counted fitness evaluations actually spent (never exceeds the budget).
    pub evals_used: u64,
    /// Whether the incumbent reached the true optimum.
    pub solved: bool,
    pub generations: u64,
    /// Noise-free fitness of the final incumbent.
    pub final_true_fitness: u64,
}

/// Full detail of a finished run: summary, final genome, and (under the
/// bandit policy) the learned per-gene statistics.
#[derive(Debug, Clone)]
pub struct ClimbResult {
    pub outcome: RunOutcome,
    pub genome: BitString,
    pub bandits: Option<GeneBanditArray>,
}

/// Per-generation record passed to observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationTrace {
    pub generation: u64,
    /// Gene that was flipped.
    pub gene: usize,
    /// Reward recorded for the bandit: offspring estimate minus the
    /// incumbent estimate it was compared against.
    pub delta: f64,
    pub accepted: bool,
    /// Counted evaluations after this generation.
    pub evals: u64,
    /// Samples folded into the incumbent estimate after this generation
    /// (always 1 in the noise-free loop).
    pub incumbent_samples: u64,
    /// Noise-free fitness of the incumbent after this generation.
    pub true_fitness: u64,
    /// Incumbent fitness estimate after this generation.
    pub incumbent_estimate: f64,
    /// Sum of the incumbent samples drawn this generation (0 in the
    /// noise-free loop, which never re-evaluates the incumbent).
    pub incumbent_sample_sum: f64,
    /// Mean of the offspring samples drawn this generation.
    pub offspring_sample_mean: f64,
}

/// Receives one callback per generation.
pub trait ClimbObserver {
    fn on_generation(&mut self, trace: &GenerationTrace);
}

impl ClimbObserver for () {
    fn on_generation(&mut self, _: &GenerationTrace) {}
}

/// Collects all generation traces in memory.
#[derive(Debug, Default)]
pub struct TraceLog(pub Vec<GenerationTrace>);

impl ClimbObserver for TraceLog {
    fn on_generation(&mut self, trace: &GenerationTrace) {
        self.0.push(*trace);
    }
}

/// Streams generation traces as CSV rows. IO errors are sticky and
/// reported by [`finish`](Self::finish).
pub struct CsvTraceWriter<W: Write> {
    out: W,
    wrote_header: bool,
    error: Option<io::Error>,
}

impl<W: Write> CsvTraceWriter<W> {
    pub const HEADER: &'static str =
        "generation,gene,delta,accepted,evals,incumbent_samples,true_fitness";

    pub fn new(out: W) -> Self {
        Self {
            out,
            wrote_header: false,
            error: None,
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> ClimbObserver for CsvTraceWriter<W> {
    fn on_generation(&mut self, t: &GenerationTrace) {
        if self.error.is_some() {
            return;
        }
        let write = (|| -> io::Result<()> {
            if !self.wrote_header {
                writeln!(self.out, "{}", Self::HEADER)?;
                self.wrote_header = true;
            }
            writeln!(
                self.out,
                "{},{},{},{},{},{},{}",
                t.generation, t.gene, t.delta, t.accepted, t.evals, t.incumbent_samples,
                t.true_fitness
            )
        })();
        self.error = write.err();
    }
}

/// Optional knobs for the detailed entry points.
#[derive(Default)]
pub struct RunOptions<'a> {
    /// Start from this genome instead of a random one.
    pub initial_genome: Option<BitString>,
    pub observer: Option<&'a mut dyn ClimbObserver>,
}

impl<'a> RunOptions<'a> {
    pub fn with_initial(genome: BitString) -> Self {
        Self {
            initial_genome: Some(genome),
            observer: None,
        }
    }

    pub fn with_observer(observer: &'a mut dyn ClimbObserver) -> Self {
        Self {
            initial_genome: None,
            observer: Some(observer),
        }
    }
}

/// Runs the configured climber and returns the outcome summary.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, ClimbError> {
    let result = if cfg.noisy_mode {
        run_noisy(cfg, RunOptions::default())?
    } else {
        run_noise_free(cfg, RunOptions::default())?
    };
    Ok(result.outcome)
}

/// Noise-free loop: evaluate the offspring once, accept on `>=`.
pub fn run_noise_free(cfg: &RunConfig, options: RunOptions<'_>) -> Result<ClimbResult, ClimbError> {
    if cfg.noisy_mode {
        return Err(ClimbError::ModeMismatch {
            expected: "noisy",
            called: "noise-free",
        });
    }
    cfg.validate()?;
    let RunOptions {
        initial_genome,
        mut observer,
    } = options;

    let mut rng = RngStream::seeded(cfg.seed);
    let mut counter = EvalCounter::new();
    let mut bandits = match cfg.policy {
        SelectionPolicy::Bandit => Some(GeneBanditArray::new(cfg.dim)),
        SelectionPolicy::Uniform => None,
    };

    let mut incumbent = initial(cfg, initial_genome, &mut rng)?;
    let optimum = cfg.problem.optimum(cfg.dim);
    let mut best_fit = cfg.problem.evaluate(&incumbent, &mut rng, &mut counter);
    let mut generations = 0u64;
    let mut solved = cfg.problem.true_fitness(&incumbent) == optimum;

    while !solved && counter.count() + 1 <= cfg.budget {
        let gene = select(cfg.policy, bandits.as_ref(), cfg.dim, &mut rng);
        let offspring = incumbent.flipped(gene);
        let offspring_fit = cfg.problem.evaluate(&offspring, &mut rng, &mut counter);
        generations += 1;

        let delta = offspring_fit - best_fit;
        let accepted = offspring_fit >= best_fit;
        let reached = offspring.get(gene);
        if accepted {
            incumbent = offspring;
            best_fit = offspring_fit;
        }
        if let Some(arr) = bandits.as_mut() {
            arr.record_outcome(gene, reached, delta);
        }

        let true_fit = cfg.problem.true_fitness(&incumbent);
        solved = true_fit == optimum;
        if let Some(obs) = observer.as_deref_mut() {
            obs.on_generation(&GenerationTrace {
                generation: generations,
                gene,
                delta,
                accepted,
                evals: counter.count(),
                incumbent_samples: 1,
                true_fitness: true_fit,
                incumbent_estimate: best_fit,
                incumbent_sample_sum: 0.0,
                offspring_sample_mean: offspring_fit,
            });
        }
    }

    Ok(ClimbResult {
        outcome: RunOutcome {
            evals_used: counter.count(),
            solved,
            generations,
            final_true_fitness: cfg.problem.true_fitness(&incumbent),
        },
        genome: incumbent,
        bandits,
    })
}

/// Noisy loop: resample both genomes, compare the offspring's sample mean
/// against the incumbent's running average.
pub fn run_noisy(cfg: &RunConfig, options: RunOptions<'_>) -> Result<ClimbResult, ClimbError> {
    if !cfg.noisy_mode {
        return Err(ClimbError::ModeMismatch {
            expected: "noise-free",
            called: "noisy",
        });
    }
    cfg.validate()?;
    let RunOptions {
        initial_genome,
        mut observer,
    } = options;

    let r = cfg.resample as u64;
    let mut rng = RngStream::seeded(cfg.seed);
    let mut counter = EvalCounter::new();
    let mut bandits = match cfg.policy {
        SelectionPolicy::Bandit => Some(GeneBanditArray::new(cfg.dim)),
        SelectionPolicy::Uniform => None,
    };

    let mut incumbent = initial(cfg, initial_genome, &mut rng)?;
    let optimum = cfg.problem.optimum(cfg.dim);
    // One initial sample seeds the incumbent estimate (M = 1).
    let mut best_fit = cfg.problem.evaluate(&incumbent, &mut rng, &mut counter);
    let mut samples = 1u64;
    let mut generations = 0u64;
    let mut solved = cfg.problem.true_fitness(&incumbent) == optimum;

    while !solved && counter.count() + 2 * r <= cfg.budget {
        let gene = select(cfg.policy, bandits.as_ref(), cfg.dim, &mut rng);
        let offspring = incumbent.flipped(gene);
        let mut incumbent_sum = 0.0;
        for _ in 0..r {
            incumbent_sum += cfg.problem.evaluate(&incumbent, &mut rng, &mut counter);
        }
        let mut offspring_sum = 0.0;
        for _ in 0..r {
            offspring_sum += cfg.problem.evaluate(&offspring, &mut rng, &mut counter);
        }
        let offspring_mean = offspring_sum / r as f64;
        generations += 1;

        let average_fitness = if cfg.incumbent_memory {
            (best_fit * samples as f64 + incumbent_sum) / (samples + r) as f64
        } else {
            incumbent_sum / r as f64
        };
        let delta = offspring_mean - average_fitness;
        let accepted = offspring_mean >= average_fitness;
        let reached = offspring.get(gene);
        if accepted {
            incumbent = offspring;
            best_fit = offspring_mean;
            samples = r;
        } else {
            best_fit = average_fitness;
            samples = if cfg.incumbent_memory { samples + r } else { r };
        }
        if let Some(arr) = bandits.as_mut() {
            arr.record_outcome(gene, reached, delta);
        }

        let true_fit = cfg.problem.true_fitness(&incumbent);
        solved = true_fit == optimum;
        if let Some(obs) = observer.as_deref_mut() {
            obs.on_generation(&GenerationTrace {
                generation: generations,
                gene,
                delta,
                accepted,
                evals: counter.count(),
                incumbent_samples: samples,
                true_fitness: true_fit,
                incumbent_estimate: best_fit,
                incumbent_sample_sum: incumbent_sum,
                offspring_sample_mean: offspring_mean,
            });
        }
    }

    Ok(ClimbResult {
        outcome: RunOutcome {
            evals_used: counter.count(),
            solved,
            generations,
            final_true_fitness: cfg.problem.true_fitness(&incumbent),
        },
        genome: incumbent,
        bandits,
    })
}

fn initial(
    cfg: &RunConfig,
    genome: Option<BitString>,
    rng: &mut RngStream,
) -> Result<BitString, ClimbError> {
    match genome {
        Some(g) if g.len() != cfg.dim => Err(ClimbError::InitialGenomeLength {
            got: g.len(),
            want: cfg.dim,
        }),
        Some(g) => Ok(g),
        None => Ok(BitString::random(cfg.dim, rng)),
    }
}

fn select(
    policy: SelectionPolicy,
    bandits: Option<&GeneBanditArray>,
    dim: usize,
    rng: &mut RngStream,
) -> usize {
    match policy {
        SelectionPolicy::Uniform => uniform_select(dim, rng),
        SelectionPolicy::Bandit => bandits
            .expect("bandit policy carries a bandit array")
            .select_gene(rng),
    }
}
