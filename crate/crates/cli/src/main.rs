use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use splitcantor_cli::codes::{make_space, twin_blocks};
use splitcantor_cli::{fuzz_number_lemma, run_experiment, CodeMode, ExperimentConfig, RunOptions};

#[derive(Parser)]
#[command(name = "splitcantor", version, about = "Finite models of generic 2n-split Cantor sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the codes of the configured space.
    GenSpace {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the chain and family and run the configured suites.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
        /// Record suite durations (breaks byte-for-byte reproducibility).
        #[arg(long)]
        timing: bool,
    },
    /// Check the pair lemma on random instances against a full scan.
    FuzzNumberLemma {
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
    },
    /// Re-run the config stored in a report and compare the output byte for byte.
    VerifyReport {
        report: PathBuf,
        #[arg(long)]
        parallel: bool,
    },
}

enum Failure {
    Usage(String),
    Suites,
}

fn load(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut config = ExperimentConfig::parse(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok(config)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializes");
    s.push('\n');
    s
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::GenSpace { config, seed, out } => {
            let config = load(&config, seed)?;
            let space = make_space(&config).map_err(|e| Failure::Usage(e.to_string()))?;
            let blocks = match config.codes {
                CodeMode::TwinBlocks { block, .. } => json!(twin_blocks(config.lambda, block)),
                _ => json!(null),
            };
            let codes: Vec<String> = space.codes().iter().map(|c| c.to_string()).collect();
            let doc = json!({
                "n": config.n,
                "lambda": config.lambda,
                "m": config.m,
                "seed": config.seed,
                "points": space.len(),
                "codes": codes,
                "twin_blocks": blocks,
            });
            emit(&pretty(&doc), out.as_deref())
        }
        Command::Run { config, seed, out, parallel, timing } => {
            let config = load(&config, seed)?;
            let report = run_experiment(&config, RunOptions { parallel, timing })
                .map_err(|e| Failure::Usage(e.to_string()))?;
            emit(&report.to_json(), out.as_deref())?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Suites)
            }
        }
        Command::FuzzNumberLemma { count, seed, n_min, n_max, out, parallel } => {
            if count == 0 || n_min < 2 || n_min > n_max {
                return Err(Failure::Usage("need count ≥ 1 and 2 ≤ n-min ≤ n-max".into()));
            }
            let summary = fuzz_number_lemma(count, seed, n_min, n_max, parallel);
            emit(&pretty(&summary), out.as_deref())?;
            if summary.failures.is_empty() {
                Ok(())
            } else {
                Err(Failure::Suites)
            }
        }
        Command::VerifyReport { report, parallel } => {
            let text = std::fs::read_to_string(&report)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", report.display())))?;
            let doc: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("not JSON: {e}")))?;
            let config: ExperimentConfig = serde_json::from_value(doc["config"].clone())
                .map_err(|e| Failure::Usage(format!("bad config echo: {e}")))?;
            config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let timing = doc["suites"]
                .as_array()
                .is_some_and(|s| s.iter().any(|x| !x["duration_ms"].is_null()));
            if timing {
                return Err(Failure::Usage("timed reports cannot be compared byte for byte".into()));
            }
            let rerun = run_experiment(&config, RunOptions { parallel, timing: false })
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let identical = rerun.to_json() == text;
            println!(
                "{}",
                pretty(&json!({ "identical": identical, "passed": rerun.passed() })).trim_end()
            );
            if identical && rerun.passed() {
                Ok(())
            } else {
                Err(Failure::Suites)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suites) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
