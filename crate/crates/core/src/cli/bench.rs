use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{load_constraint, load_instance, read_json};
use super::{run_algorithm, SolveOptions};
use crate::algorithms::Algorithm;
use crate::exact::{brute_force_opt, ratio_of, Ratio, MAX_BRUTE_FORCE_N};
use crate::oracle::Oracle;
use crate::{Error, Result};

/// One solver run. Paths are relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchEntry {
    pub instance: PathBuf,
    pub constraint: PathBuf,
    pub algorithm: Algorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_override: Option<f64>,
    /// Compute the brute-force optimum when `n <= 24`.
    #[serde(default = "yes")]
    pub exact: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub runs: Vec<BenchEntry>,
}

#[derive(Debug, Serialize)]
struct Row {
    instance: String,
    algorithm: Algorithm,
    n: usize,
    k: Option<usize>,
    value: f64,
    opt: Option<f64>,
    ratio: Option<String>,
    queries: u64,
    millis: f64,
}

/// Runs every manifest entry (in parallel) and renders the CSV in manifest order.
pub(crate) fn run_manifest(path: &Path) -> Result<String> {
    let (manifest, _): (Manifest, _) = read_json(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let rows = manifest
        .runs
        .par_iter()
        .map(|entry| run_entry(base, entry))
        .collect::<Result<Vec<_>>>()?;

    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(csv_error)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

fn run_entry(base: &Path, entry: &BenchEntry) -> Result<Row> {
    let (instance, _) = load_instance(&base.join(&entry.instance))?;
    let constraint = load_constraint(&base.join(&entry.constraint))?;
    let n = instance.n();
    let oracle = Oracle::new(instance);
    let options = SolveOptions {
        epsilon: entry.epsilon,
        seed: entry.seed,
        lambda_override: entry.lambda_override,
    };
    let started = Instant::now();
    let trace = run_algorithm(&oracle, &constraint, entry.algorithm, &options)?;
    let millis = started.elapsed().as_secs_f64() * 1e3;
    if !constraint.is_feasible(&trace.final_set)? {
        return Err(Error::Internal(format!(
            "{} returned an infeasible set on {}",
            entry.algorithm,
            entry.instance.display()
        )));
    }
    let opt = if entry.exact && n <= MAX_BRUTE_FORCE_N {
        Some(brute_force_opt(oracle.instance(), &constraint)?.opt_value)
    } else {
        None
    };
    let ratio = opt.map(|opt| match ratio_of(trace.final_value, opt) {
        Ratio::Value(r) => r.to_string(),
        Ratio::Vacuous => "vacuous".to_string(),
    });
    Ok(Row {
        instance: entry.instance.display().to_string(),
        algorithm: entry.algorithm,
        n,
        k: constraint.size_parameter(n),
        value: trace.final_value,
        opt,
        ratio,
        queries: trace.total_queries,
        millis,
    })
}

fn csv_error(e: csv::Error) -> Error {
    Error::Internal(format!("csv: {e}"))
}
