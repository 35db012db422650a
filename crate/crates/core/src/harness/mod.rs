//! Deterministic experiment runner.
//!
//! A [`RunConfig`] expands into one [`Task`] per (algorithm, function,
//! transformation, dimension, run). Each task derives its own seed from that
//! tuple, owns its random streams and counters, and runs in parallel with
//! the others; records are then sorted by key, so the output does not
//! depend on scheduling or on the order of the configuration lists.
//!
//! The thread count follows rayon's default unless `INVBENCH_THREADS` is
//! set to a positive integer.

mod config;
mod run;

pub use config::{AlgorithmSpec, RunConfig};
pub use run::{derive_seed, execute_run, execute_run_traced, Accounting, RunRecord, Task};

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::checkpoint_schedule;
use crate::suite::{make_suite, Suite};

pub const SCHEMA_VERSION: u32 = 1;
pub const RESULTS_CSV: &str = "results.csv";
pub const TRAJECTORIES_JSON: &str = "trajectories.json";
pub const CONFIG_JSON: &str = "config.json";
pub const THREADS_ENV: &str = "INVBENCH_THREADS";

pub const CSV_HEADER: [&str; 11] = ["algorithm", "hybrid", "function", "transform", "dim", "run", "seed", "final_error", "final_value", "evals", "flags"];

/// Records of an executed grid with the configuration that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub schema_version: u32,
    pub config: RunConfig,
    /// Evaluation counts at which trajectories are sampled.
    pub checkpoint_evals: Vec<u64>,
    pub records: Vec<RunRecord>,
}

impl ResultSet {
    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.records.iter().map(|r| r.dim).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

/// Expands the grid into tasks in canonical order.
pub fn plan(config: &RunConfig) -> Result<Vec<Task>> {
    config.validate()?;
    let mut tasks = Vec::with_capacity(config.task_count());
    for algorithm in &config.algorithms {
        for &function in &config.function_ids() {
            for transform in &config.transformations {
                for &dim in &config.dims {
                    for run in 0..config.runs {
                        tasks.push(Task {
                            algorithm: algorithm.clone(),
                            function,
                            transform: transform.clone(),
                            dim,
                            run,
                            seed: derive_seed(config.master_seed, algorithm.id.key(), function, transform.kind, dim, run),
                            budget: config.budget_fes,
                            agents: config.agents,
                            checkpoints: config.checkpoints,
                            master_seed: config.master_seed,
                        });
                    }
                }
            }
        }
    }
    Ok(tasks)
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => builder = builder.num_threads(n),
            _ => return Err(Error::config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        }
    }
    builder.build().map_err(|e| Error::config(format!("cannot start worker threads: {e}")))
}

/// Runs every task of the grid.
pub fn execute(config: &RunConfig) -> Result<ResultSet> {
    let tasks = plan(config)?;
    let suites: BTreeMap<usize, Suite> = config.dims.iter().map(|&d| Ok((d, make_suite(config.suite_seed, d)?))).collect::<Result<_>>()?;
    let pool = thread_pool()?;
    let mut records: Vec<RunRecord> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| {
                let f = suites[&t.dim].get(t.function).ok_or_else(|| Error::NotFound(format!("function {}", t.function)))?;
                execute_run(t, f)
            })
            .collect::<Result<_>>()
    })?;
    records.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(ResultSet {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        checkpoint_evals: checkpoint_schedule(config.budget_fes, config.checkpoints),
        records,
    })
}

/// Formats a float for the raw CSV (17 significant digits).
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Csv { path: path.to_path_buf(), source: e }
}

/// Writes `results.csv`, `trajectories.json`, `config.json` and one suite
/// manifest per dimension into `dir`. Returns the written paths.
pub fn write_results(results: &ResultSet, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let csv_path = dir.join(RESULTS_CSV);
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| csv_error(&csv_path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| csv_error(&csv_path, e))?;
    for r in &results.records {
        w.write_record([
            r.algorithm.clone(),
            r.hybrid.to_string(),
            r.function.to_string(),
            r.transform.label().to_string(),
            r.dim.to_string(),
            r.run.to_string(),
            r.seed.to_string(),
            format_float(r.final_error),
            format_float(r.final_value),
            r.evaluations_used.to_string(),
            r.flags(),
        ])
        .map_err(|e| csv_error(&csv_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;
    written.push(csv_path);

    let json_path = dir.join(TRAJECTORIES_JSON);
    write_json(&json_path, results)?;
    written.push(json_path);

    let config_path = dir.join(CONFIG_JSON);
    write_json_pretty(&config_path, &results.config)?;
    written.push(config_path);

    for &dim in &results.config.dims {
        let path = dir.join(format!("suite_manifest_d{dim}.json"));
        make_suite(results.config.suite_seed, dim)?.write_manifest(&path)?;
        written.push(path);
    }
    Ok(written)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, value).map_err(|e| Error::Json { path: path.to_path_buf(), source: e })?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

fn write_json_pretty<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Json { path: path.to_path_buf(), source: e })?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// Loads a result set written by [`write_results`].
pub fn load_results(dir: &Path) -> Result<ResultSet> {
    let path = dir.join(TRAJECTORIES_JSON);
    let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
    let results: ResultSet = serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Json { path: path.clone(), source: e })?;
    if results.schema_version != SCHEMA_VERSION {
        return Err(Error::config(format!("{}: unsupported schema version {}", path.display(), results.schema_version)));
    }
    Ok(results)
}
