//! Experiment planning, execution, aggregation, and reporting.
//!
//! A plan is a TOML document describing a grid of problem configurations
//! plus a repetition count and a master seed. Expanding the plan yields one
//! [`RunConfig`](crate::RunConfig) per (cell, repetition) with a seed mixed
//! deterministically from the master seed, so a plan pins every run
//! exactly regardless of execution order or parallelism.

mod aggregate;
mod execute;
mod io;
mod plan;
mod svg;

pub use aggregate::{aggregate, AggregateRow};
pub use execute::{execute, RunRecord};
pub use io::{
    read_aggregates_csv, read_records_csv, write_aggregates_csv, write_records_csv,
    AGGREGATE_HEADER, RECORD_HEADER,
};
pub use plan::{mix_seed, ExperimentPlan, GridEntry, PlannedRun};
pub use svg::{emit_plot_svg, render_plot_svg, PlotMode};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("plan parse error: {0}")]
    PlanParse(#[from] toml::de::Error),
    #[error("plan serialize error: {0}")]
    PlanSerialize(#[from] toml::ser::Error),
    #[error("unsupported plan schema version {0} (this build reads version 1)")]
    UnsupportedSchemaVersion(u32),
    #[error("plan has an empty grid")]
    EmptyGrid,
    #[error("plan needs at least one repetition")]
    ZeroRepetitions,
    #[error("budget factor must be at least 1")]
    ZeroBudgetFactor,
    #[error("grid entry {entry}: {field} must be nonempty")]
    EmptyGridField { entry: usize, field: &'static str },
    #[error("grid entry {entry}: dimensions must be at least 1")]
    ZeroDimension { entry: usize },
    #[error("grid entry {entry}: block sizes must be at least 1")]
    ZeroBlockSize { entry: usize },
    #[error("grid entry {entry}: sigma must be finite and nonnegative, got {sigma}")]
    InvalidSigma { entry: usize, sigma: f64 },
    #[error("grid entry {entry}: resample counts must be at least 1")]
    ZeroResample { entry: usize },
    #[error("grid entry {entry}: onemax does not take block_sizes")]
    BlockSizesOnOneMax { entry: usize },
    #[error("grid entry {entry}: royalroad requires block_sizes")]
    MissingBlockSizes { entry: usize },
    #[error("parallelism must be at least 1")]
    InvalidParallelism,
    #[error("failed to build the thread pool: {0}")]
    ThreadPool(String),
    #[error("no records to aggregate")]
    EmptyRecords,
    #[error("no rows to plot")]
    EmptyPlot,
    #[error("rows mix problem kinds; plot one problem at a time")]
    MixedProblems,
    #[error("rows contain no plottable points (no configuration solved)")]
    NoFinitePoints,
    #[error("csv line {line}: {message}")]
    CsvParse { line: usize, message: String },
    #[error("csv header mismatch: expected {expected:?}, found {found:?}")]
    CsvHeader { expected: String, found: String },
}
