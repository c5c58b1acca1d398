//! Runs solvers over a corpus and collects one record per (instance, solver).

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use tap_core::exact::{solve_auto, solve_brute_force};
use tap_core::Instance;

use crate::error::{CliError, Result};
use crate::format::parse_instance;
use crate::solve::{run_solver, SolveOptions, SolverChoice};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub solver: String,
    pub margin: i64,
    pub exact: bool,
    pub oracle_margin: Option<i64>,
    /// `margin / oracle_margin`, only when the oracle margin is positive.
    pub ratio: Option<f64>,
    pub time_ms: f64,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub w: usize,
}

/// Loads every `*.tap` file of `dir`, named by file stem, sorted by name.
pub fn load_corpus(dir: &Path) -> Result<Vec<(String, Instance)>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut paths: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.extension().is_some_and(|ext| ext == "tap") {
            paths.push(path);
        }
    }
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let instance = parse_instance(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
            let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok((name, instance))
        })
        .collect()
}

/// Exact optimum when one is affordable: brute force up to `limit`
/// exemplars, otherwise the dispatcher if it certifies exactness.
fn oracle(instance: &Instance, limit: usize) -> Option<i64> {
    if instance.n_exemplars() <= limit {
        return solve_brute_force(instance, limit).ok().map(|r| r.solution.margin);
    }
    solve_auto(instance, limit)
        .ok()
        .filter(|r| r.exact)
        .map(|r| r.solution.margin)
}

/// Runs every solver on every instance in parallel. Pairs whose solver does
/// not apply to the instance are left out. Records are ordered by
/// (instance, solver) whatever the scheduling.
pub fn run_bench(corpus: &[(String, Instance)], solvers: &[SolverChoice], options: &SolveOptions) -> Vec<BenchRecord> {
    let oracles: Vec<Option<i64>> = corpus
        .par_iter()
        .map(|(_, inst)| oracle(inst, options.fallback_limit))
        .collect();
    let mut records: Vec<BenchRecord> = corpus
        .par_iter()
        .zip(&oracles)
        .flat_map(|((name, inst), &oracle_margin)| {
            solvers.par_iter().filter_map(move |&solver| {
                let start = Instant::now();
                let outcome = run_solver(inst, solver, options).ok()?;
                let time_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
                let stats = inst.classify();
                let margin = outcome.report.solution.margin;
                Some(BenchRecord {
                    instance: name.clone(),
                    solver: solver.name().to_string(),
                    margin,
                    exact: outcome.report.exact,
                    oracle_margin,
                    ratio: oracle_margin.filter(|&o| o > 0).map(|o| margin as f64 / o as f64),
                    time_ms,
                    n: stats.n_features,
                    m: stats.n_exemplars,
                    k: stats.max_occurrence,
                    w: stats.max_weight,
                })
            })
        })
        .collect();
    records.sort_by(|a, b| (&a.instance, &a.solver).cmp(&(&b.instance, &b.solver)));
    records
}

/// Column order of [`BenchRecord`], written even when there are no rows.
pub const CSV_HEADER: [&str; 11] = [
    "instance",
    "solver",
    "margin",
    "exact",
    "oracle_margin",
    "ratio",
    "time_ms",
    "n",
    "m",
    "k",
    "w",
];

pub fn write_csv(records: &[BenchRecord], out: impl std::io::Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    if records.is_empty() {
        writer.write_record(CSV_HEADER)?;
    }
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush().map_err(|e| CliError::io("<csv>", e))?;
    Ok(())
}
