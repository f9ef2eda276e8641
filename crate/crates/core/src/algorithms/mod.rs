//! Solvers for symmetric submodular maximization.
//!
//! Every solver follows the same pattern: pick an element by a greedy rule,
//! add it, then run [`delete`] so the current set has no element with a
//! negative marginal. Each run produces a [`RunTrace`] with per-round
//! records and the number of oracle queries consumed.
//!
//! Marginals are always computed against a cached value of the current set,
//! so the query counts in the trace match the algorithmic accounting.

mod cardinality;
mod delete;
mod knapsack;
mod matroid;
mod packing;

pub use cardinality::{greedy_cardinality, sample_greedy_cardinality, sample_size};
pub use delete::delete;
pub use knapsack::{knapsack_enum, DEFAULT_KNAPSACK_EPSILON};
pub use matroid::{greedy_matroid, matroid_rounds};
pub use packing::{mw_packing, mw_packing_with_lambda};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, IdSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    GreedyCard,
    SampleGreedyCard,
    GreedyMatroid,
    MwPacking,
    KnapsackEnum,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::GreedyCard,
        Algorithm::SampleGreedyCard,
        Algorithm::GreedyMatroid,
        Algorithm::MwPacking,
        Algorithm::KnapsackEnum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::GreedyCard => "greedy-card",
            Algorithm::SampleGreedyCard => "sample-greedy-card",
            Algorithm::GreedyMatroid => "greedy-matroid",
            Algorithm::MwPacking => "mw-packing",
            Algorithm::KnapsackEnum => "knapsack-enum",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm `{s}`")))
    }
}

/// Parameters echoed into the trace. Only the ones the algorithm uses are set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_override: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Round count `K` of the matroid algorithm.
    #[serde(default, rename = "K", skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    /// Per-round sample size `r` of the sampling algorithm.
    #[serde(default, rename = "r", skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    /// Number of enumerated seed sets in the knapsack algorithm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub index: usize,
    pub selected: usize,
    /// Element swapped out (matroid exchange only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swapped_out: Option<usize>,
    pub before_delete: IdSet,
    pub after_delete: IdSet,
    /// Value of the set after `delete`.
    pub value: f64,
    /// Queries consumed by the run so far.
    pub queries: u64,
    /// `sum_i A_ij w_i` for the selected element (packing only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub price: Option<f64>,
    /// `sum_i b_i w_i` at the start of the round (packing only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub algorithm: Algorithm,
    pub params: RunParams,
    /// Value of the starting set.
    pub initial_value: f64,
    pub rounds: Vec<RoundRecord>,
    pub final_set: IdSet,
    pub final_value: f64,
    pub total_queries: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Relative scale under which two gains are treated as tied.
const TIE_SCALE: f64 = 1e-12;

/// Lowest-id candidate whose score is within rounding noise of the maximum.
///
/// Scores come from differences of floating-point sums, so gains that are
/// equal over the reals can differ in the last bits; those count as ties.
pub(crate) fn argmax_lowest_id(candidates: &[(usize, f64)]) -> Option<(usize, f64)> {
    let best = candidates.iter().map(|&(_, s)| s).max_by(f64::total_cmp)?;
    if best == f64::INFINITY {
        return candidates.iter().copied().find(|&(_, s)| s == best);
    }
    let slack = TIE_SCALE * best.abs().max(1.0);
    candidates
        .iter()
        .copied()
        .filter(|&(_, s)| s >= best - slack)
        .min_by_key(|&(u, _)| u)
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_lowest_id_on_ties() {
        assert_eq!(argmax_lowest_id(&[]), None);
        assert_eq!(
            argmax_lowest_id(&[(4, 1.0), (2, 3.0), (1, 3.0)]),
            Some((1, 3.0))
        );
        let noisy = 1.0 / 3.0 + 1.0 / 9.0;
        assert_eq!(
            argmax_lowest_id(&[(7, noisy + 1e-16), (0, noisy)]),
            Some((0, noisy))
        );
        assert_eq!(
            argmax_lowest_id(&[(0, 1.0), (1, 1.0 + 1e-6)]),
            Some((1, 1.0 + 1e-6))
        );
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
            assert_eq!(serde_json::to_string(&a).unwrap(), format!("\"{a}\""));
        }
        assert!("nope".parse::<Algorithm>().is_err());
    }
}
