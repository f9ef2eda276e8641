use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algorithms::{Algorithm, RoundRecord, RunParams, RunTrace};
use crate::constraints::Constraint;
use crate::exact::{ExactResult, Ratio};
use crate::generators::InstanceFile;
use crate::oracle::Instance;
use crate::{IdSet, Result};

/// Where an instance came from and the SHA-256 of its bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRef {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSummary {
    pub opt_value: f64,
    pub witness: IdSet,
    pub ratio: Ratio,
}

/// Output of `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: InstanceRef,
    pub constraint: Constraint,
    pub algorithm: Algorithm,
    pub params: RunParams,
    pub final_set: IdSet,
    pub final_value: f64,
    pub total_queries: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<Vec<RoundRecord>>,
    /// Only present with `--timing`, so that default reports are reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(
        instance: InstanceRef,
        constraint: Constraint,
        trace: RunTrace,
        trace_rounds: bool,
    ) -> Self {
        Self {
            instance,
            constraint,
            algorithm: trace.algorithm,
            params: trace.params,
            final_set: trace.final_set,
            final_value: trace.final_value,
            total_queries: trace.total_queries,
            exact: None,
            rounds: trace_rounds.then_some(trace.rounds),
            duration_ms: None,
            warnings: trace.warnings,
        }
    }
}

/// Output of `exact`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactReport {
    pub instance: InstanceRef,
    pub constraint: Constraint,
    #[serde(flatten)]
    pub result: ExactResult,
}

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> Result<(T, InstanceRef)> {
    let bytes = fs::read(path)?;
    let value = serde_json::from_slice(&bytes)?;
    let reference = InstanceRef {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    };
    Ok((value, reference))
}

pub(crate) fn load_instance(path: &Path) -> Result<(Instance, InstanceRef)> {
    let (file, reference): (InstanceFile, _) = read_json(path)?;
    Ok((file.instance, reference))
}

pub(crate) fn load_constraint(path: &Path) -> Result<Constraint> {
    Ok(read_json(path)?.0)
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}
