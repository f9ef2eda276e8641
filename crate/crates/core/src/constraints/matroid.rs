use std::collections::BTreeMap;

use crate::{Error, IdSet, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    parts: Vec<Vec<usize>>,
    limits: Vec<usize>,
    /// Part index of every element; the parts cover `0..part_of.len()`
    /// exactly when no entry is `None`.
    part_of: Vec<Option<usize>>,
}

impl PartitionMatroid {
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn limits(&self) -> &[usize] {
        &self.limits
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matroid {
    Uniform { k: usize },
    Partition(PartitionMatroid),
}

impl Matroid {
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "uniform matroid rank must be positive".into(),
            ));
        }
        Ok(Matroid::Uniform { k })
    }

    pub fn partition(parts: Vec<Vec<usize>>, limits: Vec<usize>) -> Result<Self> {
        if parts.len() != limits.len() {
            return Err(Error::MalformedInstance(format!(
                "{} parts but {} limits",
                parts.len(),
                limits.len()
            )));
        }
        let size = parts.iter().flatten().map(|&u| u + 1).max().unwrap_or(0);
        let mut part_of = vec![None; size];
        for (p, part) in parts.iter().enumerate() {
            for &u in part {
                if part_of[u].replace(p).is_some() {
                    return Err(Error::MalformedInstance(format!(
                        "element {u} appears in more than one part"
                    )));
                }
            }
        }
        Ok(Matroid::Partition(PartitionMatroid {
            parts,
            limits,
            part_of,
        }))
    }

    /// Rank over the ground set `0..n`.
    pub fn rank(&self, n: usize) -> usize {
        match self {
            Matroid::Uniform { k } => (*k).min(n),
            Matroid::Partition(p) => p
                .parts
                .iter()
                .zip(&p.limits)
                .map(|(part, &limit)| part.len().min(limit))
                .sum(),
        }
    }

    pub fn check_ground(&self, n: usize) -> Result<()> {
        match self {
            Matroid::Uniform { .. } => Ok(()),
            Matroid::Partition(p) => {
                if p.part_of.len() == n && p.part_of.iter().all(Option::is_some) {
                    Ok(())
                } else {
                    Err(Error::MalformedInstance(format!(
                        "partition parts do not cover the ground set 0..{n} exactly"
                    )))
                }
            }
        }
    }

    pub fn is_independent(&self, set: &IdSet) -> Result<bool> {
        match self {
            Matroid::Uniform { k } => Ok(set.len() <= *k),
            Matroid::Partition(p) => {
                let mut counts = vec![0usize; p.parts.len()];
                for u in set.iter() {
                    let part = p.part_of.get(u).copied().flatten().ok_or_else(|| {
                        Error::MalformedInstance(format!("element {u} belongs to no part"))
                    })?;
                    counts[part] += 1;
                    if counts[part] > p.limits[part] {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// A matroid of rank `k` over `0..n` augmented with `2k` zero-value dummy
/// elements `n..n+2k`.
///
/// `S` is independent iff `S \ D` is independent in the base matroid and
/// `|S| <= k`, so every base of the extension has exactly `k` elements.
#[derive(Debug, Clone)]
pub struct ExtendedMatroid {
    base: Matroid,
    n: usize,
    k: usize,
}

impl ExtendedMatroid {
    pub fn new(base: Matroid, n: usize) -> Result<Self> {
        base.check_ground(n)?;
        let k = base.rank(n);
        Ok(Self { base, n, k })
    }

    pub fn base(&self) -> &Matroid {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    /// Number of real elements.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of the extended ground set `n + 2k`.
    pub fn ground_size(&self) -> usize {
        self.n + 2 * self.k
    }

    pub fn is_dummy(&self, id: usize) -> bool {
        id >= self.n
    }

    pub fn dummies(&self) -> std::ops::Range<usize> {
        self.n..self.ground_size()
    }

    pub fn is_independent(&self, set: &IdSet) -> Result<bool> {
        if set.max().is_some_and(|m| m >= self.ground_size()) {
            return Err(Error::InvalidArgument(format!(
                "set {set:?} leaves the extended ground set of size {}",
                self.ground_size()
            )));
        }
        if set.len() > self.k {
            return Ok(false);
        }
        self.base.is_independent(&set.truncated(self.n))
    }

    pub fn is_base(&self, set: &IdSet) -> Result<bool> {
        Ok(set.len() == self.k && self.is_independent(set)?)
    }

    /// Greedy maximum-weight base avoiding `excluded`.
    ///
    /// `weights` covers the real elements; dummies weigh zero. Elements are
    /// scanned by descending weight, then ascending id (so real elements
    /// precede dummies on ties), and kept whenever independence survives.
    pub fn max_weight_base(&self, weights: &[f64], excluded: &IdSet) -> Result<IdSet> {
        if weights.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} weights, got {}",
                self.n,
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_nan()) {
            return Err(Error::InvalidArgument(format!(
                "weight {w} is not a number"
            )));
        }
        let weight = |u: usize| if u < self.n { weights[u] } else { 0.0 };
        let mut order: Vec<usize> = (0..self.ground_size())
            .filter(|&u| !excluded.contains(u))
            .collect();
        order.sort_by(|&a, &b| weight(b).total_cmp(&weight(a)).then(a.cmp(&b)));

        let mut base = IdSet::new();
        for u in order {
            if base.len() == self.k {
                break;
            }
            base.insert(u);
            if !self.is_independent(&base)? {
                base.remove(u);
            }
        }
        if base.len() != self.k {
            return Err(Error::Internal(format!(
                "greedy base has {} elements, rank is {}",
                base.len(),
                self.k
            )));
        }
        Ok(base)
    }

    /// One-to-one `g: A -> B` with `g(u) = u` on `A ∩ B` and `B + u - g(u)`
    /// independent for every `u` in `A`.
    ///
    /// Built as a perfect matching of the exchange graph on `(A\B) x (B\A)`
    /// by augmenting paths. Candidates are tried in ascending id order and a
    /// greedy pass seeds the matching, so the result is deterministic.
    pub fn exchange_bijection(&self, a: &IdSet, b: &IdSet) -> Result<BTreeMap<usize, usize>> {
        for (name, set) in [("A", a), ("B", b)] {
            if !self.is_base(set)? {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {set:?} is not a base of the extended matroid"
                )));
            }
        }
        let left: Vec<usize> = a.difference(b).iter().collect();
        let right: Vec<usize> = b.difference(a).iter().collect();
        let mut adjacency = Vec::with_capacity(left.len());
        for &u in &left {
            let mut row = Vec::new();
            for (idx, &w) in right.iter().enumerate() {
                let mut swapped = b.clone();
                swapped.insert(u);
                swapped.remove(w);
                if self.is_independent(&swapped)? {
                    row.push(idx);
                }
            }
            adjacency.push(row);
        }

        let mut owner: Vec<Option<usize>> = vec![None; right.len()];
        let mut matched: Vec<Option<usize>> = vec![None; left.len()];
        for (l, row) in adjacency.iter().enumerate() {
            if let Some(&r) = row.iter().find(|&&r| owner[r].is_none()) {
                owner[r] = Some(l);
                matched[l] = Some(r);
            }
        }
        for l in 0..left.len() {
            if matched[l].is_some() {
                continue;
            }
            let mut visited = vec![false; right.len()];
            if !augment(l, &adjacency, &mut owner, &mut matched, &mut visited) {
                return Err(Error::Internal(format!(
                    "exchange graph between {a:?} and {b:?} has no perfect matching"
                )));
            }
        }

        let mut g: BTreeMap<usize, usize> = a.intersection(b).iter().map(|u| (u, u)).collect();
        for (l, r) in matched.iter().enumerate() {
            let r = r.expect("every left vertex is matched");
            g.insert(left[l], right[r]);
        }
        for (&u, &w) in &g {
            let mut swapped = b.clone();
            swapped.insert(u);
            swapped.remove(w);
            if !self.is_independent(&swapped)? {
                return Err(Error::Internal(format!(
                    "exchange {u} -> {w} leaves the independent sets"
                )));
            }
        }
        Ok(g)
    }
}

fn augment(
    l: usize,
    adjacency: &[Vec<usize>],
    owner: &mut [Option<usize>],
    matched: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &r in &adjacency[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        let free = match owner[r] {
            None => true,
            Some(other) => augment(other, adjacency, owner, matched, visited),
        };
        if free {
            owner[r] = Some(l);
            matched[l] = Some(r);
            return true;
        }
    }
    false
}
