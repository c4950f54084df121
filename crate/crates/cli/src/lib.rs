//! Config parsing, experiment execution, JSON reports and the pair-lemma
//! fuzz harness behind the `splitcantor` binary.

pub mod codes;
pub mod config;
pub mod experiment;
pub mod fuzz;
pub mod report;

pub use config::{CodeMode, ConfigError, ExperimentConfig, FuzzSettings, Suite};
pub use experiment::{run_experiment, RunOptions};
pub use fuzz::{fuzz_number_lemma, FuzzSummary};
pub use report::{Report, Status};
