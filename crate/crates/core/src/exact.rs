//! Brute-force optimum for small ground sets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::RunTrace;
use crate::constraints::Constraint;
use crate::oracle::Instance;
use crate::{Error, IdSet, Result};

/// Largest ground set brute force will enumerate.
pub const MAX_BRUTE_FORCE_N: usize = 24;

const CHUNK_BITS: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub opt_value: f64,
    pub witness: IdSet,
    pub sets_enumerated: u64,
}

/// Maximum of `f` over all feasible subsets.
///
/// Subsets are scanned in increasing integer encoding (`sum 2^i`); among equal
/// values the smallest encoding wins. Evaluation bypasses oracle counters.
pub fn brute_force_opt(instance: &Instance, constraint: &Constraint) -> Result<ExactResult> {
    let n = instance.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::InstanceTooLarge {
            n,
            max: MAX_BRUTE_FORCE_N,
        });
    }
    constraint.check_ground(n)?;

    let total = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n);
    let best = (0..total / chunk)
        .into_par_iter()
        .map(|c| -> Result<Option<(u64, f64)>> {
            let mut set = IdSet::new();
            let mut best: Option<(u64, f64)> = None;
            for mask in c * chunk..(c + 1) * chunk {
                set.set_mask(mask);
                if !constraint.is_feasible(&set)? {
                    continue;
                }
                let value = instance.value(&set);
                if best.is_none_or(|(_, v)| value > v) {
                    best = Some((mask, value));
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(u64, f64)>, (mask, value)| match acc {
            Some((_, v)) if v >= value => acc,
            _ => Some((mask, value)),
        });

    // The empty set is feasible under every supported constraint.
    let (mask, opt_value) =
        best.ok_or_else(|| Error::Internal("no feasible subset found".into()))?;
    Ok(ExactResult {
        opt_value,
        witness: IdSet::from_mask(mask),
        sets_enumerated: total,
    })
}

/// `final_value / opt_value`, or [`Ratio::Vacuous`] when the optimum is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Value(f64),
    Vacuous,
}

impl Ratio {
    pub fn value(self) -> Option<f64> {
        match self {
            Ratio::Value(r) => Some(r),
            Ratio::Vacuous => None,
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Value(r) => s.serialize_f64(*r),
            Ratio::Vacuous => s.serialize_str("vacuous"),
        }
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Value(f64),
            Label(String),
        }
        match Raw::deserialize(d)? {
            Raw::Value(r) => Ok(Ratio::Value(r)),
            Raw::Label(s) if s == "vacuous" => Ok(Ratio::Vacuous),
            Raw::Label(s) => Err(serde::de::Error::custom(format!("unknown ratio `{s}`"))),
        }
    }
}

pub fn ratio(trace: &RunTrace, exact: &ExactResult) -> Ratio {
    ratio_of(trace.final_value, exact.opt_value)
}

pub fn ratio_of(value: f64, opt: f64) -> Ratio {
    if opt == 0.0 {
        Ratio::Vacuous
    } else {
        Ratio::Value(value / opt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::greedy_cardinality;
    use crate::constraints::{CardinalityConstraint, KnapsackConstraint, Matroid};
    use crate::generators::{complete_graph, cycle_graph, random_graph, tight_example};
    use crate::oracle::{Oracle, TableFunction, WeightedGraph};
    use proptest::prelude::*;

    fn card(k: usize) -> Constraint {
        CardinalityConstraint::new(k).unwrap().into()
    }

    #[test]
    fn triangle_k1() {
        let r = brute_force_opt(&complete_graph(3).into(), &card(1)).unwrap();
        assert_eq!(r.opt_value, 2.0);
        assert_eq!(r.witness, IdSet::from(vec![0]));
        assert_eq!(r.sets_enumerated, 8);
    }

    #[test]
    fn four_cycle_k2() {
        let r = brute_force_opt(&cycle_graph(4).into(), &card(2)).unwrap();
        assert_eq!(r.opt_value, 4.0);
        assert_eq!(r.witness, IdSet::from(vec![0, 2]));
    }

    #[test]
    fn only_empty_set_feasible() {
        let t = TableFunction::new(2, vec![1.0, 3.0, 3.0, 1.0]).unwrap();
        let k = KnapsackConstraint::new(vec![5.0, 5.0], 1.0).unwrap();
        let r = brute_force_opt(&t.into(), &k.into()).unwrap();
        assert_eq!(r.opt_value, 1.0);
        assert_eq!(r.witness, IdSet::new());
    }

    #[test]
    fn tight_example_k3() {
        let ex = tight_example(3).unwrap();
        let r = brute_force_opt(&ex.graph.clone().into(), &card(3)).unwrap();
        assert!((r.opt_value - 3.0).abs() < 1e-12);
        assert_eq!(r.witness, IdSet::from(vec![3, 4, 5]));
    }

    #[test]
    fn chunked_and_small_agree() {
        // n = 16 spans several chunks; the witness must still be the first maximum.
        let g = random_graph(16, 0.3, (1.0, 1.0), 3).unwrap();
        let inst: Instance = g.into();
        let r = brute_force_opt(&inst, &card(16)).unwrap();
        let table = inst.value_table().unwrap();
        let best = table.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let first = table.iter().position(|&v| v == best).unwrap() as u64;
        assert_eq!(r.opt_value, best);
        assert_eq!(r.witness, IdSet::from_mask(first));
    }

    #[test]
    fn refuses_large_instances() {
        let g = WeightedGraph::new(25, vec![]).unwrap();
        assert!(matches!(
            brute_force_opt(&g.into(), &card(1)),
            Err(Error::InstanceTooLarge { n: 25, max: 24 })
        ));
    }

    #[test]
    fn ratio_conventions() {
        let o = Oracle::new(complete_graph(3).into());
        let t = greedy_cardinality(&o, 1).unwrap();
        let e = brute_force_opt(o.instance(), &card(1)).unwrap();
        assert_eq!(ratio(&t, &e), Ratio::Value(1.0));
        assert_eq!(o.query_count(), t.total_queries);
        assert_eq!(ratio_of(0.0, 0.0), Ratio::Vacuous);
        assert_eq!(
            serde_json::to_string(&Ratio::Vacuous).unwrap(),
            "\"vacuous\""
        );
        assert_eq!(
            serde_json::from_str::<Ratio>("0.5").unwrap(),
            Ratio::Value(0.5)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn witness_is_symmetric_and_relaxation_monotone(seed in 0u64..10_000, n in 2usize..10) {
            let inst: Instance = random_graph(n, 0.5, (0.0, 3.0), seed).unwrap().into();
            let full = brute_force_opt(&inst, &card(n)).unwrap();
            let complement = full.witness.complement(n);
            prop_assert!((inst.value(&full.witness) - inst.value(&complement)).abs() < 1e-9);
            prop_assert_eq!(inst.value(&full.witness), full.opt_value);
            let mut previous = f64::NEG_INFINITY;
            for k in 1..=n {
                let r = brute_force_opt(&inst, &card(k)).unwrap();
                prop_assert!(r.opt_value >= previous);
                prop_assert!(r.opt_value <= full.opt_value);
                prop_assert!(r.witness.len() <= k);
                previous = r.opt_value;
            }
            let uniform = brute_force_opt(&inst, &Matroid::uniform(1).unwrap().into()).unwrap();
            prop_assert_eq!(uniform.opt_value, brute_force_opt(&inst, &card(1)).unwrap().opt_value);
        }
    }
}
