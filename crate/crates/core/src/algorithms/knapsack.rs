use super::packing::run_multiplicative_updates;
use super::{check_epsilon, Algorithm, RunParams, RunTrace};
use crate::constraints::{KnapsackConstraint, PackingConstraint};
use crate::oracle::Oracle;
use crate::{Error, IdSet, Result};

/// Epsilon of the inner multiplicative-updates runs.
pub const DEFAULT_KNAPSACK_EPSILON: f64 = 0.1;

/// Knapsack maximization by partial enumeration.
///
/// Every feasible set of at most two elements is evaluated directly and then
/// used as a seed: the multiplicative-updates greedy continues from the seed
/// over the elements no heavier than its lightest member, against the budget
/// left after the seed. Seeds are never removed. The best set seen wins
/// (first found on ties). Uses `O(n^4)` queries.
pub fn knapsack_enum(
    oracle: &Oracle,
    knapsack: &KnapsackConstraint,
    epsilon: Option<f64>,
) -> Result<RunTrace> {
    let epsilon = epsilon.unwrap_or(DEFAULT_KNAPSACK_EPSILON);
    check_epsilon(epsilon)?;
    let n = oracle.n();
    if knapsack.weights().len() != n {
        return Err(Error::MalformedInstance(format!(
            "knapsack has {} weights for a ground set of {n}",
            knapsack.weights().len()
        )));
    }
    let start = oracle.query_count();
    let weights = knapsack.weights();
    let budget = knapsack.budget();
    let admissible: Vec<usize> = knapsack.admissible().iter().collect();

    let mut seeds = vec![IdSet::new()];
    for (i, &a) in admissible.iter().enumerate() {
        seeds.push(IdSet::from(vec![a]));
        for &b in &admissible[i + 1..] {
            if weights[a] + weights[b] <= budget {
                seeds.push(IdSet::from(vec![a, b]));
            }
        }
    }

    let mut best_set = IdSet::new();
    let mut best_value = f64::NEG_INFINITY;
    let mut best_rounds = Vec::new();
    let mut initial_value = None;
    for seed in &seeds {
        let seed_value = oracle.eval(seed)?;
        initial_value.get_or_insert(seed_value);
        if seed_value > best_value {
            best_value = seed_value;
            best_set = seed.clone();
            best_rounds.clear();
        }

        let residual = budget - knapsack.total_weight(seed)?;
        let cap = seed
            .iter()
            .map(|t| weights[t])
            .fold(f64::INFINITY, f64::min);
        let candidates: IdSet = admissible
            .iter()
            .copied()
            .filter(|&j| !seed.contains(j) && weights[j] <= cap && weights[j] <= residual)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let heaviest = candidates.iter().map(|j| weights[j]).fold(0.0, f64::max);
        let (packing, lambda) = if heaviest > 0.0 {
            let row = (0..n)
                .map(|j| {
                    if candidates.contains(j) {
                        weights[j] / heaviest
                    } else {
                        0.0
                    }
                })
                .collect();
            let packing = PackingConstraint::new(vec![row], vec![residual / heaviest])?;
            let lambda = (epsilon * packing.width()?).exp();
            (packing, lambda)
        } else {
            // Nothing left costs anything; only the gains bound the run.
            (
                PackingConstraint::new(vec![vec![0.0; n]], vec![1.0])?,
                f64::INFINITY,
            )
        };
        let run = run_multiplicative_updates(oracle, &packing, lambda, &candidates, seed)?;
        if run.value > best_value {
            best_value = run.value;
            best_set = run.set;
            best_rounds = run.rounds;
        }
    }

    if !knapsack.is_feasible(&best_set)? {
        return Err(Error::Internal(format!(
            "knapsack solution {best_set:?} exceeds the budget"
        )));
    }
    Ok(RunTrace {
        algorithm: Algorithm::KnapsackEnum,
        params: RunParams {
            epsilon: Some(epsilon),
            seeds: Some(seeds.len()),
            ..RunParams::default()
        },
        initial_value: initial_value.unwrap_or(best_value),
        rounds: best_rounds,
        final_set: best_set,
        final_value: best_value,
        total_queries: oracle.query_count() - start,
        warnings: Vec::new(),
    })
}
