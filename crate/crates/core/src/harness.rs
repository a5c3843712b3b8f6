//! Experiment protocols, configuration, CSV emission and the run manifest.

mod clt;
mod config;
mod conjecture;
mod cst_check;
mod output;
mod pair;
mod selftest;

pub use clt::{run_clt_experiment, CltRun, CltTrial};
pub use config::{ConfigOverrides, DensityChoice, Experiment, ExperimentConfig};
pub use conjecture::{run_conjecture_experiment, ConjectureRun, ConjectureTrial};
pub use cst_check::{run_cst_check, CstCheck};
pub use output::{fmt_f64, Summary};
pub use pair::{run_pairing_experiment, PairTrial, PairingRun};
pub use selftest::{selftest, SelftestCheck, SelftestReport};

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const SEED_RULE: &str =
    "trial_seed = splitmix64_finalize(master_seed XOR trial_index * 0x9E3779B97F4A7C15); each trial runs splitmix64 from trial_seed";

/// Runs `f(0..trials)` on a pool of `threads` workers (0: all cores) and
/// returns the results in trial order.
pub fn run_trials<T, F>(threads: usize, trials: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| (0..trials).into_par_iter().map(&f).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub version: String,
    pub wall_time_seconds: f64,
    pub seed_rule: String,
    pub files: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: Summary,
    /// False only when a selftest or cst-check criterion failed.
    pub passed: bool,
    pub files: Vec<PathBuf>,
}

/// Runs the configured experiment and writes its CSV files, `summary.csv`
/// and `manifest.json` into `output_dir`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let (summary, passed, names): (Summary, bool, &[&str]) = match cfg.experiment {
        Experiment::Pair => {
            let run = run_pairing_experiment(cfg)?;
            run.write(dir, cfg)?;
            (run.summary, true, &["trials.csv", "summary.csv"])
        }
        Experiment::Clt => {
            let run = run_clt_experiment(cfg)?;
            run.write(dir)?;
            (run.summary, true, &["trials.csv", "summary.csv"])
        }
        Experiment::Conjecture => {
            let run = run_conjecture_experiment(cfg)?;
            run.write(dir)?;
            (run.summary, true, &["atoms.csv", "ecdf.csv", "summary.csv"])
        }
        Experiment::CstCheck => {
            let check = run_cst_check(cfg)?;
            check.summary.write(&dir.join("summary.csv"))?;
            (check.summary, check.passed, &["summary.csv"])
        }
        Experiment::Selftest => {
            let report = selftest(cfg)?;
            report.summary.write(&dir.join("summary.csv"))?;
            let passed = report.passed();
            (report.summary, passed, &["summary.csv"])
        }
    };
    let manifest = RunManifest {
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        seed_rule: SEED_RULE.to_string(),
        files: names.iter().map(|s| s.to_string()).collect(),
    };
    output::write_json(&dir.join("manifest.json"), &manifest)?;
    let mut files: Vec<PathBuf> = names.iter().map(|n| dir.join(n)).collect();
    files.push(dir.join("manifest.json"));
    Ok(RunOutcome { summary, passed, files })
}
