use super::delete::delete_from;
use super::{argmax_lowest_id, check_epsilon, Algorithm, RoundRecord, RunParams, RunTrace};
use crate::constraints::{ExtendedMatroid, Matroid};
use crate::oracle::Oracle;
use crate::{Error, IdSet, Result};

/// `K = ceil((k / 3) ln(1 / epsilon))`.
pub fn matroid_rounds(k: usize, epsilon: f64) -> usize {
    ((k as f64 / 3.0) * (1.0 / epsilon).ln()).ceil() as usize
}

/// Exchange-based greedy over a matroid of rank `k`.
///
/// The ground set is extended with `2k` dummies and the solution always
/// holds exactly `k` elements (a base of the extension), starting from `k`
/// dummies. Each of the `K` rounds
///
/// 1. computes `f(u | S)` for every real `u` outside `S` (dummies gain 0),
/// 2. takes a maximum-weight base `M` disjoint from `S`,
/// 3. maps `M` onto `S` with the exchange bijection `g`,
/// 4. performs the single swap `S + u - g(u)` of highest value,
/// 5. runs `delete` over the real members and refills with unused dummies.
///
/// The returned `final_set` contains real elements only and is independent
/// in `matroid`. For `k >= 4` the value is at least
/// `(1 - (1 - 3/k)^K) / 3 * OPT`.
pub fn greedy_matroid(oracle: &Oracle, matroid: &Matroid, epsilon: f64) -> Result<RunTrace> {
    check_epsilon(epsilon)?;
    let n = oracle.n();
    let em = ExtendedMatroid::new(matroid.clone(), n)?;
    let k = em.rank();
    if k == 0 {
        return Err(Error::InvalidParameter(
            "matroid rank must be at least 1".into(),
        ));
    }
    let rounds_total = matroid_rounds(k, epsilon);
    let start = oracle.query_count();

    let mut set: IdSet = em.dummies().take(k).collect();
    let mut value = oracle.eval(&IdSet::new())?;
    let initial_value = value;
    let mut rounds = Vec::with_capacity(rounds_total);

    for index in 1..=rounds_total {
        let real = set.truncated(n);
        let mut with_value = vec![value; n];
        let mut weights = vec![0.0; n];
        for u in (0..n).filter(|&u| !set.contains(u)) {
            let mut grown = real.clone();
            grown.insert(u);
            with_value[u] = oracle.eval(&grown)?;
            weights[u] = with_value[u] - value;
        }

        let base = em.max_weight_base(&weights, &set)?;
        let exchange = em.exchange_bijection(&base, &set)?;

        let mut swaps = Vec::with_capacity(k);
        let mut swap_values = Vec::with_capacity(k);
        for (&u, &out) in &exchange {
            let swapped_value = match (em.is_dummy(u), em.is_dummy(out)) {
                (true, true) => value,
                (false, true) => with_value[u],
                _ => {
                    let mut candidate = real.clone();
                    candidate.remove(out);
                    if !em.is_dummy(u) {
                        candidate.insert(u);
                    }
                    oracle.eval(&candidate)?
                }
            };
            swaps.push((u, swapped_value - value));
            swap_values.push((u, out, swapped_value));
        }
        let (selected, _) = argmax_lowest_id(&swaps)
            .ok_or_else(|| Error::Internal("exchange bijection is empty".into()))?;
        let &(_, out, swapped_value) = swap_values
            .iter()
            .find(|&&(u, _, _)| u == selected)
            .expect("selected swap exists");

        set.insert(selected);
        set.remove(out);
        let before_delete = set.truncated(n);
        let (cleaned, cleaned_value) =
            delete_from(oracle, before_delete.clone(), swapped_value, &IdSet::new())?;
        value = cleaned_value;
        let mut refilled = cleaned.clone();
        for d in em.dummies().filter(|&d| set.contains(d)) {
            refilled.insert(d);
        }
        for d in em.dummies() {
            if refilled.len() == k {
                break;
            }
            refilled.insert(d);
        }
        set = refilled;
        debug_assert!(em.is_base(&set).unwrap_or(false));

        rounds.push(RoundRecord {
            index,
            selected,
            swapped_out: Some(out),
            before_delete,
            after_delete: cleaned,
            value,
            queries: oracle.query_count() - start,
            price: None,
            beta: None,
        });
    }

    let final_set = set.truncated(n);
    if !matroid.is_independent(&final_set)? {
        return Err(Error::Internal(format!(
            "matroid solution {final_set:?} is not independent"
        )));
    }
    Ok(RunTrace {
        algorithm: Algorithm::GreedyMatroid,
        params: RunParams {
            k: Some(k),
            epsilon: Some(epsilon),
            rounds: Some(rounds_total),
            ..RunParams::default()
        },
        initial_value,
        rounds,
        final_set,
        final_value: value,
        total_queries: oracle.query_count() - start,
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, random_graph};
    use crate::oracle::WeightedGraph;

    #[test]
    fn round_count() {
        assert_eq!(matroid_rounds(1, 0.05), 1);
        assert_eq!(matroid_rounds(2, 0.05), 2);
        assert_eq!(matroid_rounds(4, 0.1), 4);
        assert_eq!(matroid_rounds(8, 0.1), 7);
    }

    #[test]
    fn uniform_rank_one_on_triangle() {
        let o = Oracle::new(complete_graph(3).into());
        let t = greedy_matroid(&o, &Matroid::uniform(1).unwrap(), 0.05).unwrap();
        assert_eq!(t.params.rounds, Some(1));
        assert_eq!(t.rounds[0].selected, 0);
        assert_eq!(t.rounds[0].swapped_out, Some(3));
        assert_eq!(t.final_set, IdSet::from(vec![0]));
        assert_eq!(t.final_value, 2.0);
    }

    #[test]
    fn empty_graph_stays_at_zero() {
        let o = Oracle::new(WeightedGraph::new(4, vec![]).unwrap().into());
        let t = greedy_matroid(&o, &Matroid::uniform(2).unwrap(), 0.1).unwrap();
        assert_eq!(t.final_value, 0.0);
    }

    #[test]
    fn partition_on_triangle() {
        // Hand simulation with the fixed tie-breaks:
        // round 1: M = {0, 2}, g = {0->3, 2->4}, both swaps worth 2, take 0.
        // round 2: S = {0, 4}; M = {1, 2}, g = {1->0, 2->4}, both worth 2, take 1.
        let o = Oracle::new(complete_graph(3).into());
        let m = Matroid::partition(vec![vec![0, 1], vec![2]], vec![1, 1]).unwrap();
        let t = greedy_matroid(&o, &m, 0.05).unwrap();
        assert_eq!(t.params.k, Some(2));
        assert_eq!(t.params.rounds, Some(2));
        let picks: Vec<(usize, Option<usize>)> = t
            .rounds
            .iter()
            .map(|r| (r.selected, r.swapped_out))
            .collect();
        assert_eq!(picks, vec![(0, Some(3)), (1, Some(0))]);
        assert_eq!(t.final_set, IdSet::from(vec![1]));
        assert_eq!(t.final_value, 2.0);
        assert!(m.is_independent(&t.final_set).unwrap());
    }

    #[test]
    fn query_bound_and_feasibility() {
        for seed in 0..8 {
            let n = 10;
            let o = Oracle::new(random_graph(n, 0.4, (0.0, 2.0), seed).unwrap().into());
            let m = Matroid::partition(
                vec![vec![0, 1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]],
                vec![2, 1, 2],
            )
            .unwrap();
            let t = greedy_matroid(&o, &m, 0.1).unwrap();
            let (k, big_k) = (t.params.k.unwrap(), t.params.rounds.unwrap());
            assert!(t.total_queries <= (big_k * (n + 2 * k + 2)) as u64);
            assert_eq!(t.total_queries, o.query_count());
            assert!(m.is_independent(&t.final_set).unwrap());
            assert_eq!(o.eval(&t.final_set).unwrap(), t.final_value);
        }
    }

    #[test]
    fn rejects_bad_epsilon_and_ground() {
        let o = Oracle::new(complete_graph(3).into());
        assert!(greedy_matroid(&o, &Matroid::uniform(1).unwrap(), 1.0).is_err());
        let m = Matroid::partition(vec![vec![0, 1]], vec![1]).unwrap();
        assert!(matches!(
            greedy_matroid(&o, &m, 0.1),
            Err(Error::MalformedInstance(_))
        ));
    }
}
