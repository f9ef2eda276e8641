//! Value oracles for symmetric submodular functions.
//!
//! An [`Instance`] is the immutable payload (graph, hypergraph or explicit
//! table). An [`Oracle`] wraps a shared instance together with its own query
//! counter; every [`Oracle::eval`] costs exactly one query. The oracle never
//! caches values, so marginal gains must be computed against a value the
//! caller already holds.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, IdSet, Result, TOLERANCE};

/// Largest ground set accepted for explicit tables.
pub const MAX_TABLE_N: usize = 26;

/// Largest ground set accepted by exhaustive validation.
pub const MAX_EXHAUSTIVE_N: usize = 20;

/// Undirected graph with non-negative edge weights; `f(S)` is the weight of
/// edges with exactly one endpoint in `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

#[derive(Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<RawGraph> for WeightedGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        WeightedGraph::new(raw.n, raw.edges)
    }
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::MalformedInstance(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::MalformedInstance(format!("self-loop at vertex {u}")));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::MalformedInstance(format!(
                    "edge ({u}, {v}) has invalid weight {w}"
                )));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn cut(&self, set: &IdSet) -> f64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| set.contains(u) != set.contains(v))
            .map(|&(_, _, w)| w)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperedge {
    pub members: Vec<usize>,
    pub w: f64,
}

/// Hypergraph whose cut function counts a hyperedge when it is split by `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph")]
pub struct WeightedHypergraph {
    n: usize,
    edges: Vec<Hyperedge>,
}

#[derive(Deserialize)]
struct RawHypergraph {
    n: usize,
    edges: Vec<Hyperedge>,
}

impl TryFrom<RawHypergraph> for WeightedHypergraph {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        WeightedHypergraph::new(raw.n, raw.edges)
    }
}

impl WeightedHypergraph {
    pub fn new(n: usize, edges: Vec<Hyperedge>) -> Result<Self> {
        for edge in &edges {
            let members: IdSet = edge.members.iter().copied().collect();
            if members.len() != edge.members.len() {
                return Err(Error::MalformedInstance(format!(
                    "hyperedge {:?} repeats a member",
                    edge.members
                )));
            }
            if members.len() < 2 {
                return Err(Error::MalformedInstance(format!(
                    "hyperedge {:?} needs at least two members",
                    edge.members
                )));
            }
            if members.max().is_some_and(|m| m >= n) {
                return Err(Error::MalformedInstance(format!(
                    "hyperedge {:?} references a vertex outside 0..{n}",
                    edge.members
                )));
            }
            if !(edge.w >= 0.0 && edge.w.is_finite()) {
                return Err(Error::MalformedInstance(format!(
                    "hyperedge {:?} has invalid weight {}",
                    edge.members, edge.w
                )));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn cut(&self, set: &IdSet) -> f64 {
        self.edges
            .iter()
            .filter(|e| {
                let inside = e.members.iter().filter(|&&m| set.contains(m)).count();
                inside > 0 && inside < e.members.len()
            })
            .map(|e| e.w)
            .sum()
    }
}

/// Explicit value table; subset `S` lives at index `sum_{i in S} 2^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct TableFunction {
    n: usize,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawTable {
    n: usize,
    values: Vec<f64>,
}

impl TryFrom<RawTable> for TableFunction {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        TableFunction::new(raw.n, raw.values)
    }
}

impl TableFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > MAX_TABLE_N {
            return Err(Error::InstanceTooLarge {
                n,
                max: MAX_TABLE_N,
            });
        }
        if values.len() != 1usize << n {
            return Err(Error::MalformedInstance(format!(
                "table for n = {n} needs {} values, found {}",
                1usize << n,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::MalformedInstance(format!(
                "non-finite table value {v}"
            )));
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Immutable payload behind an oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Instance {
    GraphCut(WeightedGraph),
    HypergraphCut(WeightedHypergraph),
    Table(TableFunction),
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::GraphCut(g) => g.n,
            Instance::HypergraphCut(h) => h.n,
            Instance::Table(t) => t.n,
        }
    }

    /// Uncounted evaluation. Members of `set` must lie in `0..n`.
    pub fn value(&self, set: &IdSet) -> f64 {
        debug_assert!(set.max().is_none_or(|m| m < self.n()));
        match self {
            Instance::GraphCut(g) => g.cut(set),
            Instance::HypergraphCut(h) => h.cut(set),
            Instance::Table(t) => t.values[set.low_mask() as usize],
        }
    }

    /// Values of all `2^n` subsets in integer-encoding order.
    pub fn value_table(&self) -> Result<Vec<f64>> {
        let n = self.n();
        if let Instance::Table(t) = self {
            return Ok(t.values.clone());
        }
        if n > crate::exact::MAX_BRUTE_FORCE_N {
            return Err(Error::InstanceTooLarge {
                n,
                max: crate::exact::MAX_BRUTE_FORCE_N,
            });
        }
        let mut set = IdSet::new();
        Ok((0..1u64 << n)
            .map(|mask| {
                set.set_mask(mask);
                self.value(&set)
            })
            .collect())
    }
}

impl From<WeightedGraph> for Instance {
    fn from(g: WeightedGraph) -> Self {
        Instance::GraphCut(g)
    }
}

impl From<WeightedHypergraph> for Instance {
    fn from(h: WeightedHypergraph) -> Self {
        Instance::HypergraphCut(h)
    }
}

impl From<TableFunction> for Instance {
    fn from(t: TableFunction) -> Self {
        Instance::Table(t)
    }
}

/// Counted value oracle over a shared instance.
///
/// The counter is atomic so an oracle may be shared across threads without
/// losing counts; separate runs should still use separate contexts
/// (see [`Oracle::fresh_context`]).
#[derive(Debug)]
pub struct Oracle {
    instance: Arc<Instance>,
    queries: AtomicU64,
}

impl Oracle {
    pub fn new(instance: Instance) -> Self {
        Self::from_shared(Arc::new(instance))
    }

    pub fn from_shared(instance: Arc<Instance>) -> Self {
        Self {
            instance,
            queries: AtomicU64::new(0),
        }
    }

    /// Same payload, new counter starting at zero.
    pub fn fresh_context(&self) -> Oracle {
        Self::from_shared(Arc::clone(&self.instance))
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn shared_instance(&self) -> Arc<Instance> {
        Arc::clone(&self.instance)
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    pub fn eval(&self, set: &IdSet) -> Result<f64> {
        let n = self.n();
        if let Some(element) = set.max().filter(|&m| m >= n) {
            return Err(Error::InvalidSet { element, n });
        }
        self.queries.fetch_add(1, Ordering::Relaxed);
        Ok(self.instance.value(set))
    }

    pub fn eval_ids(&self, ids: &[usize]) -> Result<f64> {
        self.eval(&IdSet::from(ids))
    }

    /// `f(S + u) - f(S)` given the caller's cached `f(S)`; one query.
    pub fn marginal(&self, u: usize, set: &IdSet, cached: f64) -> Result<f64> {
        if set.contains(u) {
            return Err(Error::InvalidArgument(format!(
                "element {u} already belongs to the set"
            )));
        }
        let mut extended = set.clone();
        extended.insert(u);
        Ok(self.eval(&extended)? - cached)
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    /// Checks non-negativity, symmetry and submodularity. Uses no counted
    /// queries.
    pub fn validate(&self, mode: ValidationMode) -> Result<ValidationReport> {
        validate(&self.instance, mode)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ValidationMode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Negative {
        set: IdSet,
        value: f64,
    },
    Asymmetric {
        set: IdSet,
        value: f64,
        complement_value: f64,
    },
    /// `f(u | small) < f(u | large)` although `small ⊆ large`.
    DiminishingReturns {
        small: IdSet,
        large: IdSet,
        u: usize,
        gain_small: f64,
        gain_large: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n: usize,
    pub mode: ValidationMode,
    pub valid: bool,
    pub checks: u64,
    pub violations: Vec<Violation>,
}

fn validate(instance: &Instance, mode: ValidationMode) -> Result<ValidationReport> {
    let n = instance.n();
    let mut violations = Vec::new();
    let mut checks = 0u64;
    match mode {
        ValidationMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_N {
                return Err(Error::InstanceTooLarge {
                    n,
                    max: MAX_EXHAUSTIVE_N,
                });
            }
            let table = instance.value_table()?;
            let full = (1u64 << n) - 1;
            for mask in 0..=full {
                let value = table[mask as usize];
                checks += 2;
                if value < -TOLERANCE {
                    violations.push(Violation::Negative {
                        set: IdSet::from_mask(mask),
                        value,
                    });
                }
                let comp = full ^ mask;
                let complement_value = table[comp as usize];
                if mask < comp && (value - complement_value).abs() > TOLERANCE {
                    violations.push(Violation::Asymmetric {
                        set: IdSet::from_mask(mask),
                        value,
                        complement_value,
                    });
                }
                // Local form: f(u|S) >= f(u|S+v) for u, v outside S.
                for u in (0..n).filter(|&u| mask & (1 << u) == 0) {
                    let gain_small = table[(mask | 1 << u) as usize] - value;
                    for v in (0..n).filter(|&v| v != u && mask & (1 << v) == 0) {
                        let large = mask | 1 << v;
                        let gain_large = table[(large | 1 << u) as usize] - table[large as usize];
                        checks += 1;
                        if gain_small < gain_large - TOLERANCE {
                            violations.push(Violation::DiminishingReturns {
                                small: IdSet::from_mask(mask),
                                large: IdSet::from_mask(large),
                                u,
                                gain_small,
                                gain_large,
                            });
                        }
                    }
                }
            }
        }
        ValidationMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let small: IdSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                let large: IdSet = small
                    .iter()
                    .chain((0..n).filter(|_| rng.gen_bool(0.5)))
                    .collect();
                for set in [&small, &large] {
                    let value = instance.value(set);
                    let complement_value = instance.value(&set.complement(n));
                    checks += 2;
                    if value < -TOLERANCE {
                        violations.push(Violation::Negative {
                            set: set.clone(),
                            value,
                        });
                    }
                    if (value - complement_value).abs() > TOLERANCE {
                        violations.push(Violation::Asymmetric {
                            set: set.clone(),
                            value,
                            complement_value,
                        });
                    }
                }
                let outside: Vec<usize> = (0..n).filter(|&u| !large.contains(u)).collect();
                if outside.is_empty() {
                    continue;
                }
                let u = outside[rng.gen_range(0..outside.len())];
                let gain = |set: &IdSet| {
                    let mut with = set.clone();
                    with.insert(u);
                    instance.value(&with) - instance.value(set)
                };
                let (gain_small, gain_large) = (gain(&small), gain(&large));
                checks += 1;
                if gain_small < gain_large - TOLERANCE {
                    violations.push(Violation::DiminishingReturns {
                        small,
                        large,
                        u,
                        gain_small,
                        gain_large,
                    });
                }
            }
        }
    }
    Ok(ValidationReport {
        n,
        mode,
        valid: violations.is_empty(),
        checks,
        violations,
    })
}
