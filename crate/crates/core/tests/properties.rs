use proptest::prelude::*;
use symsub::algorithms::{
    delete, greedy_cardinality, greedy_matroid, knapsack_enum, mw_packing,
    sample_greedy_cardinality, RunTrace,
};
use symsub::constraints::{KnapsackConstraint, Matroid, PackingConstraint};
use symsub::generators::{random_graph, random_hypergraph};
use symsub::oracle::{Instance, Oracle};
use symsub::IdSet;

fn instance_strategy() -> impl Strategy<Value = Instance> {
    (2usize..=10, any::<u64>(), prop::bool::ANY, 0.1f64..0.9).prop_map(|(n, seed, hyper, p)| {
        if hyper && n >= 3 {
            random_hypergraph(n, 2 * n, 3, (0.0, 2.0), seed)
                .unwrap()
                .into()
        } else {
            random_graph(n, p, (0.0, 2.0), seed).unwrap().into()
        }
    })
}

/// Structural checks every trace must pass, independent of the algorithm.
fn check_trace(oracle: &Oracle, trace: &RunTrace) -> Result<(), TestCaseError> {
    let instance = oracle.instance();
    prop_assert_eq!(trace.total_queries, oracle.query_count());
    prop_assert!((instance.value(&trace.final_set) - trace.final_value).abs() < 1e-9);
    let mut last = 0;
    for (i, round) in trace.rounds.iter().enumerate() {
        prop_assert_eq!(round.index, i + 1);
        prop_assert!(round.queries >= last);
        last = round.queries;
        prop_assert!(round.after_delete.is_subset(&round.before_delete));
        prop_assert!((instance.value(&round.after_delete) - round.value).abs() < 1e-9);
        prop_assert!(
            instance.value(&round.after_delete) >= instance.value(&round.before_delete) - 1e-9
        );
    }
    prop_assert!(last <= trace.total_queries);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delete_never_loses_value(instance in instance_strategy(), mask in any::<u64>()) {
        let n = instance.n();
        let oracle = Oracle::new(instance);
        let set = IdSet::from_mask(mask & ((1 << n) - 1));
        let out = delete(&oracle, &set, &IdSet::new()).unwrap();
        let f = |s: &IdSet| oracle.instance().value(s);
        prop_assert!(out.is_subset(&set));
        prop_assert!(f(&out) >= f(&set));
        for u in out.iter() {
            let mut without = out.clone();
            without.remove(u);
            prop_assert!(f(&out) - f(&without) >= 0.0);
        }
        prop_assert_eq!(oracle.query_count(), 1 + set.len() as u64);
        // A second pass changes nothing.
        prop_assert_eq!(delete(&oracle, &out, &IdSet::new()).unwrap(), out);
    }

    #[test]
    fn delete_keeps_protected(instance in instance_strategy(), mask in any::<u64>(), keep in any::<u64>()) {
        let n = instance.n();
        let oracle = Oracle::new(instance);
        let set = IdSet::from_mask(mask & ((1 << n) - 1));
        let protected = set.intersection(&IdSet::from_mask(keep));
        let out = delete(&oracle, &set, &protected).unwrap();
        prop_assert!(protected.is_subset(&out));
    }

    #[test]
    fn cardinality_traces(instance in instance_strategy(), k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let n = instance.n();
        let k = 1 + ((n - 1) as f64 * k_frac) as usize;
        let oracle = Oracle::new(instance);
        let trace = greedy_cardinality(&oracle, k).unwrap();
        check_trace(&oracle, &trace)?;
        prop_assert!(trace.final_set.len() <= k);
        prop_assert_eq!(trace.rounds.len(), k);

        let ctx = oracle.fresh_context();
        let sampled = sample_greedy_cardinality(&ctx, k, 0.2, seed).unwrap();
        check_trace(&ctx, &sampled)?;
        prop_assert!(sampled.final_set.len() <= k);
        let again = sample_greedy_cardinality(&oracle.fresh_context(), k, 0.2, seed).unwrap();
        prop_assert_eq!(sampled, again);
    }

    #[test]
    fn matroid_traces(instance in instance_strategy(), k in 1usize..=4, split in 1usize..=9) {
        let n = instance.n();
        let oracle = Oracle::new(instance);
        let matroid = if split >= n {
            Matroid::uniform(k.min(n)).unwrap()
        } else {
            let parts = vec![(0..split).collect(), (split..n).collect()];
            Matroid::partition(parts, vec![k.min(split), 1]).unwrap()
        };
        let trace = greedy_matroid(&oracle, &matroid, 0.2).unwrap();
        check_trace(&oracle, &trace)?;
        prop_assert!(matroid.is_independent(&trace.final_set).unwrap());
        prop_assert!(trace.final_set.max().is_none_or(|m| m < n));
    }

    #[test]
    fn packing_traces(instance in instance_strategy(), m in 1usize..=3, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let n = instance.n();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0.05..1.0)).collect()).collect();
        let b: Vec<f64> = (0..m).map(|_| rng.gen_range(1.0..2.5)).collect();
        let packing = PackingConstraint::new(a, b).unwrap();
        let oracle = Oracle::new(instance);
        let trace = mw_packing(&oracle, &packing, 0.3).unwrap();
        check_trace(&oracle, &trace)?;
        prop_assert!(packing.is_feasible(&trace.final_set).unwrap());
        // Row weights only grow, so beta is non-decreasing across rounds.
        let betas: Vec<f64> = trace.rounds.iter().map(|r| r.beta.unwrap()).collect();
        prop_assert!(betas.windows(2).all(|w| w[0] <= w[1]));
        let values: Vec<f64> = trace.rounds.iter().map(|r| r.value).collect();
        prop_assert!(values.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn knapsack_traces(instance in instance_strategy(), seed in any::<u64>(), frac in 0.05f64..0.8) {
        use rand::{Rng, SeedableRng};
        let n = instance.n();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let budget = (weights.iter().sum::<f64>() * frac).max(1e-3);
        let knapsack = KnapsackConstraint::new(weights, budget).unwrap();
        let oracle = Oracle::new(instance);
        let trace = knapsack_enum(&oracle, &knapsack, None).unwrap();
        prop_assert_eq!(trace.total_queries, oracle.query_count());
        prop_assert!(knapsack.is_feasible(&trace.final_set).unwrap());
        prop_assert!((oracle.instance().value(&trace.final_set) - trace.final_value).abs() < 1e-9);
        prop_assert!(trace.total_queries <= (n as u64 + 1).pow(4) * 4);
    }
}
