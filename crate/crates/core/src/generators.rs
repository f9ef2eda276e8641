//! Instance generators.
//!
//! Random instances draw from `ChaCha8Rng::seed_from_u64(seed)`. Pairs are
//! visited as `(u, v)` with `u < v` in lexicographic order; each consumes one
//! uniform draw for inclusion and, when included, one for the weight.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constraints::{CardinalityConstraint, KnapsackConstraint};
use crate::exact::{brute_force_opt, MAX_BRUTE_FORCE_N};
use crate::oracle::{Hyperedge, Instance, TableFunction, WeightedGraph, WeightedHypergraph};
use crate::{Error, IdSet, Result, TOLERANCE};

/// Name recorded in instance files for the generator stream.
pub const PRNG_NAME: &str = "ChaCha8";

/// Unit-weight complete graph `K_n`.
pub fn complete_graph(n: usize) -> WeightedGraph {
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v, 1.0)))
        .collect();
    WeightedGraph::new(n, edges).expect("complete graph is well formed")
}

/// Unit-weight cycle `0 - 1 - ... - (n-1) - 0`. Needs `n >= 3` to be simple;
/// smaller `n` gives the path or the empty graph.
pub fn cycle_graph(n: usize) -> WeightedGraph {
    let edges = match n {
        0 | 1 => Vec::new(),
        2 => vec![(0, 1, 1.0)],
        _ => (0..n).map(|u| (u, (u + 1) % n, 1.0)).collect(),
    };
    WeightedGraph::new(n, edges).expect("cycle is well formed")
}

/// Graph where every pair is kept with probability `edge_prob` and weighted
/// uniformly in `[lo, hi]`.
pub fn random_graph(
    n: usize,
    edge_prob: f64,
    weight_range: (f64, f64),
    seed: u64,
) -> Result<WeightedGraph> {
    if n < 1 {
        return Err(Error::InvalidParameter("random graph needs n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {edge_prob} is outside [0, 1]"
        )));
    }
    check_weight_range(weight_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < edge_prob {
                edges.push((u, v, draw_weight(&mut rng, weight_range)));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

/// Hypergraph with `num_edges` hyperedges; each picks an arity uniformly in
/// `2..=max_arity`, then that many distinct members, then a weight.
pub fn random_hypergraph(
    n: usize,
    num_edges: usize,
    max_arity: usize,
    weight_range: (f64, f64),
    seed: u64,
) -> Result<WeightedHypergraph> {
    if max_arity < 2 || max_arity > n {
        return Err(Error::InvalidParameter(format!(
            "max arity {max_arity} must lie in 2..={n}"
        )));
    }
    check_weight_range(weight_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(num_edges);
    for _ in 0..num_edges {
        let arity = rng.gen_range(2..=max_arity);
        let mut members = index::sample(&mut rng, n, arity).into_vec();
        members.sort_unstable();
        let w = draw_weight(&mut rng, weight_range);
        edges.push(Hyperedge { members, w });
    }
    WeightedHypergraph::new(n, edges)
}

fn check_weight_range((lo, hi): (f64, f64)) -> Result<()> {
    if lo >= 0.0 && lo <= hi && hi.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "weight range [{lo}, {hi}] must satisfy 0 <= lo <= hi < inf"
        )))
    }
}

fn draw_weight(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Bipartite worst case for the cardinality greedy.
///
/// Vertices are `u_1..u_k` (ids `0..k`), `o_1..o_k` (ids `k..2k`) and
/// `v_ij` (id `2k + (i-1)c + (j-1)`). Each `o_i` is joined to `u_j` with
/// weight `(1/k)(1 - 2/k)^(j-1)` and to `v_i1..v_ic` with weight
/// `(1 + (1 - 2/k)^k) / (2c)`, so `f(o_i) = 1` and `f(O) = k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TightExample {
    pub k: usize,
    pub c: usize,
    pub graph: WeightedGraph,
    pub u_ids: Vec<usize>,
    pub o_ids: Vec<usize>,
    pub v_ids: Vec<usize>,
}

pub fn tight_example(k: usize) -> Result<TightExample> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "tight example needs k >= 3, got {k}"
        )));
    }
    let q = 1.0 - 2.0 / k as f64;
    let c = tight_example_c(k);
    let tail = (1.0 + q.powi(k as i32)) / (2.0 * c as f64);
    let u_ids: Vec<usize> = (0..k).collect();
    let o_ids: Vec<usize> = (k..2 * k).collect();
    let v_ids: Vec<usize> = (2 * k..2 * k + c * k).collect();

    let mut edges = Vec::with_capacity(k * (k + c));
    for i in 0..k {
        for (j, &u) in u_ids.iter().enumerate() {
            edges.push((o_ids[i], u, q.powi(j as i32) / k as f64));
        }
        for j in 0..c {
            edges.push((o_ids[i], v_ids[i * c + j], tail));
        }
    }
    let graph = WeightedGraph::new(2 * k + c * k, edges)?;
    Ok(TightExample {
        k,
        c,
        graph,
        u_ids,
        o_ids,
        v_ids,
    })
}

/// `c = ceil((1 + (1 - 2/k)^k) / (2 (1 - 2/k)^(k-1)))`.
pub fn tight_example_c(k: usize) -> usize {
    let q = 1.0 - 2.0 / k as f64;
    ((1.0 + q.powi(k as i32)) / (2.0 * q.powi(k as i32 - 1))).ceil() as usize
}

impl TightExample {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn optimal_value(&self) -> f64 {
        self.k as f64
    }

    /// Value greedy attains: `(k/2)(1 - (1 - 2/k)^k)`.
    pub fn greedy_value(&self) -> f64 {
        let k = self.k as f64;
        k / 2.0 * (1.0 - (1.0 - 2.0 / k).powi(self.k as i32))
    }

    /// Certified optimum under cardinality `k`: brute force when the ground
    /// set is small enough, otherwise the structural argument (every edge
    /// has exactly one endpoint in `O` and each `o_i` has cut value 1).
    pub fn certificate(&self) -> Result<OptimumCertificate> {
        let witness: IdSet = self.o_ids.iter().copied().collect();
        if self.n() <= MAX_BRUTE_FORCE_N {
            let constraint = CardinalityConstraint::new(self.k)?.into();
            let exact = brute_force_opt(&self.graph.clone().into(), &constraint)?;
            return Ok(OptimumCertificate {
                optimal_value: exact.opt_value,
                witness: exact.witness,
                certified_by: Certification::BruteForce,
            });
        }
        let one_side = self
            .graph
            .edges()
            .iter()
            .all(|&(a, b, _)| witness.contains(a) != witness.contains(b));
        let unit = self
            .o_ids
            .iter()
            .all(|&o| (self.graph.cut(&IdSet::from(vec![o])) - 1.0).abs() < TOLERANCE);
        if !(one_side && unit) {
            return Err(Error::Internal(
                "tight example failed its structural optimality check".into(),
            ));
        }
        Ok(OptimumCertificate {
            optimal_value: self.graph.cut(&witness),
            witness,
            certified_by: Certification::Analytic,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Analytic,
    BruteForce,
}

/// Sidecar written next to a generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumCertificate {
    pub optimal_value: f64,
    pub witness: IdSet,
    pub certified_by: Certification,
}

/// How an instance file was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prng: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
}

/// On-disk instance: the oracle payload plus optional provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(flatten)]
    pub instance: Instance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
}

impl From<Instance> for InstanceFile {
    fn from(instance: Instance) -> Self {
        Self {
            instance,
            generator: None,
        }
    }
}

/// Star-shaped knapsack instance: edges `0-1`, `0-2` of weight 10 and `1-2`
/// of weight 1, item weights `[3, 1, 1]`, budget 3. Optimum 20.
pub fn star_example() -> (WeightedGraph, KnapsackConstraint) {
    let graph = WeightedGraph::new(3, vec![(0, 1, 10.0), (0, 2, 10.0), (1, 2, 1.0)])
        .expect("star is well formed");
    let knapsack = KnapsackConstraint::new(vec![3.0, 1.0, 1.0], 3.0).expect("valid knapsack");
    (graph, knapsack)
}

/// Unit-weight Petersen graph (outer 5-cycle, inner pentagram, spokes).
pub fn petersen_graph() -> WeightedGraph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5, 1.0));
        edges.push((5 + i, 5 + (i + 2) % 5, 1.0));
        edges.push((i, 5 + i, 1.0));
    }
    WeightedGraph::new(10, edges).expect("petersen is well formed")
}

/// Small named instances (all with `n <= 12`) for exhaustive property suites.
pub fn bundled_instances() -> Vec<(&'static str, Instance)> {
    let table = Instance::from(random_graph(4, 0.8, (0.5, 2.0), 4).expect("valid parameters"))
        .value_table()
        .expect("small instance");
    vec![
        ("triangle", complete_graph(3).into()),
        ("four-cycle", cycle_graph(4).into()),
        ("star", star_example().0.into()),
        ("petersen", petersen_graph().into()),
        (
            "random-graph-12",
            random_graph(12, 0.4, (0.0, 2.0), 12)
                .expect("valid parameters")
                .into(),
        ),
        (
            "random-hypergraph-10",
            random_hypergraph(10, 12, 4, (0.5, 2.0), 10)
                .expect("valid parameters")
                .into(),
        ),
        (
            "cut-table-4",
            TableFunction::new(4, table).expect("table of a cut").into(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Oracle, ValidationMode};

    #[test]
    fn complete_and_cycle() {
        let k3 = complete_graph(3);
        assert_eq!(k3.edges().len(), 3);
        assert_eq!(k3.cut(&IdSet::from(vec![0])), 2.0);
        let c4 = cycle_graph(4);
        assert_eq!(c4.cut(&IdSet::from(vec![0, 2])), 4.0);
    }

    #[test]
    fn random_graph_edge_cases() {
        assert_eq!(
            random_graph(3, 1.0, (1.0, 1.0), 0).unwrap(),
            complete_graph(3)
        );
        let empty = random_graph(6, 0.0, (0.0, 1.0), 0).unwrap();
        assert!(empty.edges().is_empty());
        assert_eq!(
            random_graph(10, 0.4, (0.0, 2.0), 9).unwrap(),
            random_graph(10, 0.4, (0.0, 2.0), 9).unwrap()
        );
        assert_ne!(
            random_graph(10, 0.4, (0.0, 2.0), 9).unwrap(),
            random_graph(10, 0.4, (0.0, 2.0), 10).unwrap()
        );
        assert!(random_graph(0, 0.5, (0.0, 1.0), 0).is_err());
        assert!(random_graph(3, 1.5, (0.0, 1.0), 0).is_err());
        assert!(random_graph(3, 0.5, (2.0, 1.0), 0).is_err());
        assert!(random_graph(3, 0.5, (-1.0, 1.0), 0).is_err());
    }

    #[test]
    fn random_hypergraph_edge_cases() {
        let h = random_hypergraph(6, 0, 3, (0.0, 1.0), 1).unwrap();
        assert!(h.edges().is_empty());
        let pairs = random_hypergraph(6, 20, 2, (0.0, 1.0), 1).unwrap();
        assert!(pairs.edges().iter().all(|e| e.members.len() == 2));
        assert_eq!(
            random_hypergraph(8, 10, 4, (0.5, 1.0), 3).unwrap(),
            random_hypergraph(8, 10, 4, (0.5, 1.0), 3).unwrap()
        );
        assert!(random_hypergraph(4, 3, 5, (0.0, 1.0), 0).is_err());
        assert!(random_hypergraph(4, 3, 1, (0.0, 1.0), 0).is_err());
    }

    #[test]
    fn tight_example_k3_layout() {
        let ex = tight_example(3).unwrap();
        assert_eq!((ex.c, ex.n()), (5, 21));
        assert_eq!(ex.o_ids, vec![3, 4, 5]);
        let w = |a: usize, b: usize| {
            ex.graph
                .edges()
                .iter()
                .find(|e| (e.0, e.1) == (a, b))
                .map(|e| e.2)
                .unwrap()
        };
        assert!((w(3, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((w(3, 1) - 1.0 / 9.0).abs() < 1e-15);
        assert!((w(3, 2) - 1.0 / 27.0).abs() < 1e-15);
        assert!((w(3, 6) - 14.0 / 135.0).abs() < 1e-15);
        assert!((w(5, 20) - 14.0 / 135.0).abs() < 1e-15);
        for &o in &ex.o_ids {
            assert!((ex.graph.cut(&IdSet::from(vec![o])) - 1.0).abs() < 1e-12);
        }
        assert!((ex.greedy_value() - 13.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn tight_example_constants() {
        assert_eq!(tight_example_c(4), 5);
        assert!(tight_example(2).is_err());
        for k in 3..=10 {
            let ex = tight_example(k).unwrap();
            assert!(ex.c >= 1);
            assert_eq!(ex.n(), 2 * k + ex.c * k);
            assert!(ex.graph.edges().iter().all(|e| e.2 >= 0.0));
        }
    }

    #[test]
    fn certificates() {
        let c3 = tight_example(3).unwrap().certificate().unwrap();
        assert_eq!(c3.certified_by, Certification::BruteForce);
        assert!((c3.optimal_value - 3.0).abs() < 1e-12);
        assert_eq!(c3.witness, IdSet::from(vec![3, 4, 5]));
        let c4 = tight_example(4).unwrap().certificate().unwrap();
        assert_eq!(c4.certified_by, Certification::Analytic);
        assert!((c4.optimal_value - 4.0).abs() < 1e-12);
        assert_eq!(c4.witness, IdSet::from(vec![4, 5, 6, 7]));
        let json = serde_json::to_string(&c4).unwrap();
        assert!(json.contains("\"certified_by\":\"analytic\""));
    }

    #[test]
    fn instance_file_round_trip() {
        let file = InstanceFile {
            instance: complete_graph(3).into(),
            generator: Some(GeneratorInfo {
                name: "random-graph".into(),
                prng: Some(PRNG_NAME.into()),
                seed: Some(5),
                params: serde_json::json!({"n": 3}),
            }),
        };
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.starts_with("{\"type\":\"graph-cut\""));
        assert_eq!(serde_json::from_str::<InstanceFile>(&text).unwrap(), file);
        let plain: InstanceFile =
            serde_json::from_str(r#"{"type":"table","n":1,"values":[0,0]}"#).unwrap();
        assert!(plain.generator.is_none());
    }

    #[test]
    fn bundled_instances_are_valid() {
        for (name, inst) in bundled_instances() {
            assert!(inst.n() <= 12, "{name}");
            let report = Oracle::new(inst)
                .validate(ValidationMode::Exhaustive)
                .unwrap();
            assert!(report.valid, "{name}: {:?}", report.violations);
        }
    }

    #[test]
    fn generated_oracles_validate() {
        for seed in 0..5 {
            let g = Oracle::new(random_graph(10, 0.5, (0.0, 5.0), seed).unwrap().into());
            assert!(g.validate(ValidationMode::Exhaustive).unwrap().valid);
            let h = Oracle::new(
                random_hypergraph(10, 15, 5, (0.0, 5.0), seed)
                    .unwrap()
                    .into(),
            );
            assert!(h.validate(ValidationMode::Exhaustive).unwrap().valid);
        }
    }
}
