use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::delete::delete_from;
use super::{argmax_lowest_id, check_epsilon, Algorithm, RoundRecord, RunParams, RunTrace};
use crate::oracle::Oracle;
use crate::{Error, IdSet, Result};

/// Deterministic greedy with a `delete` pass after every addition.
///
/// Runs `k` rounds; each picks the element of `N` with the largest marginal
/// gain (lowest id on ties). Members of `S` count with gain 0, so a round in
/// which every outside gain is negative leaves `S` unchanged. Guarantees `f(S) >= (1 - (1 - 2/k)^k) / 2 * OPT` with at most
/// `k (n + k + 2)` queries.
pub fn greedy_cardinality(oracle: &Oracle, k: usize) -> Result<RunTrace> {
    check_k(oracle.n(), k)?;
    let params = RunParams {
        k: Some(k),
        ..RunParams::default()
    };
    run(oracle, k, Algorithm::GreedyCard, params, |set| {
        (0..oracle.n()).filter(|&u| !set.contains(u)).collect()
    })
}

/// `r = ceil((n / k) ln(1 / epsilon))`.
pub fn sample_size(n: usize, k: usize, epsilon: f64) -> usize {
    ((n as f64 / k as f64) * (1.0 / epsilon).ln()).ceil() as usize
}

/// Randomized variant that scans only `r` elements of `N \ S` per round,
/// drawn without replacement from a ChaCha8 stream seeded with `seed`.
/// Members of `S` stay available with gain 0, as in [`greedy_cardinality`].
///
/// When `r` covers all of `N \ S` no randomness is consumed and the run is
/// identical to [`greedy_cardinality`].
pub fn sample_greedy_cardinality(
    oracle: &Oracle,
    k: usize,
    epsilon: f64,
    seed: u64,
) -> Result<RunTrace> {
    let n = oracle.n();
    check_k(n, k)?;
    check_epsilon(epsilon)?;
    let r = sample_size(n, k, epsilon);
    let params = RunParams {
        k: Some(k),
        epsilon: Some(epsilon),
        seed: Some(seed),
        sample_size: Some(r),
        ..RunParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run(oracle, k, Algorithm::SampleGreedyCard, params, |set| {
        let pool: Vec<usize> = (0..n).filter(|&u| !set.contains(u)).collect();
        if r >= pool.len() {
            return pool;
        }
        let mut sample: Vec<usize> = index::sample(&mut rng, pool.len(), r)
            .into_iter()
            .map(|i| pool[i])
            .collect();
        sample.sort_unstable();
        sample
    })
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "cardinality k = {k} must lie in 1..={n}"
        )));
    }
    Ok(())
}

fn run(
    oracle: &Oracle,
    k: usize,
    algorithm: Algorithm,
    params: RunParams,
    mut candidates: impl FnMut(&IdSet) -> Vec<usize>,
) -> Result<RunTrace> {
    let start = oracle.query_count();
    let mut set = IdSet::new();
    let mut value = oracle.eval(&set)?;
    let initial_value = value;
    let mut rounds = Vec::with_capacity(k);

    for index in 1..=k {
        let mut gains = Vec::new();
        let mut values = Vec::new();
        for u in candidates(&set) {
            set.insert(u);
            let with = oracle.eval(&set)?;
            set.remove(u);
            gains.push((u, with - value));
            values.push(with);
        }
        // Members of S have marginal 0 and need no query.
        gains.extend(set.iter().map(|u| (u, 0.0)));
        let Some((selected, _)) = argmax_lowest_id(&gains) else {
            break;
        };
        let before_delete = if set.contains(selected) {
            set.clone()
        } else {
            let pos = gains.iter().position(|&(u, _)| u == selected).unwrap();
            set.insert(selected);
            let before_delete = set.clone();
            (set, value) = delete_from(oracle, set, values[pos], &IdSet::new())?;
            before_delete
        };
        rounds.push(RoundRecord {
            index,
            selected,
            swapped_out: None,
            before_delete,
            after_delete: set.clone(),
            value,
            queries: oracle.query_count() - start,
            price: None,
            beta: None,
        });
    }

    Ok(RunTrace {
        algorithm,
        params,
        initial_value,
        rounds,
        final_set: set,
        final_value: value,
        total_queries: oracle.query_count() - start,
        warnings: Vec::new(),
    })
}
