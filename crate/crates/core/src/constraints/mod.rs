//! Constraint families: cardinality, matroids, packing and knapsack.
//!
//! Feasibility checks never touch the value oracle.

mod matroid;

pub use matroid::{ExtendedMatroid, Matroid, PartitionMatroid};

use serde::{Deserialize, Serialize};

use crate::{Error, IdSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardinalityConstraint {
    k: usize,
}

impl CardinalityConstraint {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "cardinality k must be positive".into(),
            ));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// `A x_S <= b` with `A` in `[0,1]^{m x n}` and `b >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PackingConstraint {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl PackingConstraint {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::MalformedInstance(
                "packing matrix has no rows".into(),
            ));
        }
        if a.len() != b.len() {
            return Err(Error::MalformedInstance(format!(
                "packing matrix has {} rows but b has {} entries",
                a.len(),
                b.len()
            )));
        }
        let cols = a[0].len();
        for (i, row) in a.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::MalformedInstance(format!(
                    "row {i} has {} columns, expected {cols}",
                    row.len()
                )));
            }
            if let Some(x) = row.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::MalformedInstance(format!(
                    "entry {x} in row {i} lies outside [0, 1]"
                )));
            }
        }
        if let Some(x) = b.iter().find(|x| !(x.is_finite() && **x >= 1.0)) {
            return Err(Error::MalformedInstance(format!("capacity {x} is below 1")));
        }
        Ok(Self { a, b })
    }

    /// Number of rows.
    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// Number of columns (the ground set size).
    pub fn columns(&self) -> usize {
        self.a[0].len()
    }

    pub fn a(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `W = min { b_i / A_ij : A_ij > 0 }`.
    pub fn width(&self) -> Result<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .flat_map(|(row, &b)| row.iter().filter(|&&x| x > 0.0).map(move |&x| b / x))
            .min_by(f64::total_cmp)
            .ok_or(Error::UndefinedWidth)
    }

    /// Row loads `A x_S`.
    pub fn loads(&self, set: &IdSet) -> Result<Vec<f64>> {
        if let Some(element) = set.max().filter(|&m| m >= self.columns()) {
            return Err(Error::MalformedInstance(format!(
                "element {element} has no column in a {}-column packing matrix",
                self.columns()
            )));
        }
        Ok(self
            .a
            .iter()
            .map(|row| set.iter().map(|j| row[j]).sum())
            .collect())
    }

    pub fn is_feasible(&self, set: &IdSet) -> Result<bool> {
        Ok(self.loads(set)?.iter().zip(&self.b).all(|(l, b)| l <= b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackConstraint {
    weights: Vec<f64>,
    budget: f64,
}

impl KnapsackConstraint {
    pub fn new(weights: Vec<f64>, budget: f64) -> Result<Self> {
        if !(budget.is_finite() && budget > 0.0) {
            return Err(Error::MalformedInstance(format!(
                "knapsack budget {budget} must be positive"
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::MalformedInstance(format!(
                "invalid knapsack weight {w}"
            )));
        }
        Ok(Self { weights, budget })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn total_weight(&self, set: &IdSet) -> Result<f64> {
        if let Some(element) = set.max().filter(|&m| m >= self.weights.len()) {
            return Err(Error::MalformedInstance(format!(
                "element {element} has no knapsack weight"
            )));
        }
        Ok(set.iter().map(|j| self.weights[j]).sum())
    }

    pub fn is_feasible(&self, set: &IdSet) -> Result<bool> {
        Ok(self.total_weight(set)? <= self.budget)
    }

    /// Elements whose weight fits the budget on their own.
    pub fn admissible(&self) -> IdSet {
        (0..self.weights.len())
            .filter(|&j| self.weights[j] <= self.budget)
            .collect()
    }

    /// Single-row packing form: `A_1j = w_j / w_max`, `b_1 = budget / w_max`
    /// with `w_max` the heaviest admissible weight.
    ///
    /// Returns `None` when every admissible element weighs zero. Columns of
    /// inadmissible elements are zero; callers must restrict the ground set
    /// to [`KnapsackConstraint::admissible`].
    pub fn to_packing(&self) -> Option<PackingConstraint> {
        let admissible = self.admissible();
        let w_max = admissible
            .iter()
            .map(|j| self.weights[j])
            .fold(0.0, f64::max);
        if w_max <= 0.0 {
            return None;
        }
        let row = (0..self.weights.len())
            .map(|j| {
                if admissible.contains(j) {
                    self.weights[j] / w_max
                } else {
                    0.0
                }
            })
            .collect();
        PackingConstraint::new(vec![row], vec![self.budget / w_max]).ok()
    }
}

/// Any supported constraint family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConstraintFile", into = "ConstraintFile")]
pub enum Constraint {
    Cardinality(CardinalityConstraint),
    Matroid(Matroid),
    Packing(PackingConstraint),
    Knapsack(KnapsackConstraint),
}

impl Constraint {
    pub fn is_feasible(&self, set: &IdSet) -> Result<bool> {
        match self {
            Constraint::Cardinality(c) => Ok(set.len() <= c.k),
            Constraint::Matroid(m) => m.is_independent(set),
            Constraint::Packing(p) => p.is_feasible(set),
            Constraint::Knapsack(k) => k.is_feasible(set),
        }
    }

    /// Verifies that the constraint's dimensions match a ground set of size `n`.
    pub fn check_ground(&self, n: usize) -> Result<()> {
        match self {
            Constraint::Cardinality(_) => Ok(()),
            Constraint::Matroid(m) => m.check_ground(n),
            Constraint::Packing(p) if p.columns() != n => Err(Error::MalformedInstance(format!(
                "packing matrix has {} columns for a ground set of {n}",
                p.columns()
            ))),
            Constraint::Knapsack(k) if k.weights.len() != n => {
                Err(Error::MalformedInstance(format!(
                    "knapsack has {} weights for a ground set of {n}",
                    k.weights.len()
                )))
            }
            _ => Ok(()),
        }
    }

    /// Size parameter echoed in reports: `k` for cardinality, the rank for
    /// matroids.
    pub fn size_parameter(&self, n: usize) -> Option<usize> {
        match self {
            Constraint::Cardinality(c) => Some(c.k),
            Constraint::Matroid(m) => Some(m.rank(n)),
            _ => None,
        }
    }
}

impl From<CardinalityConstraint> for Constraint {
    fn from(c: CardinalityConstraint) -> Self {
        Constraint::Cardinality(c)
    }
}

impl From<Matroid> for Constraint {
    fn from(m: Matroid) -> Self {
        Constraint::Matroid(m)
    }
}

impl From<PackingConstraint> for Constraint {
    fn from(p: PackingConstraint) -> Self {
        Constraint::Packing(p)
    }
}

impl From<KnapsackConstraint> for Constraint {
    fn from(k: KnapsackConstraint) -> Self {
        Constraint::Knapsack(k)
    }
}

/// On-disk shape of a constraint.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum ConstraintFile {
    Cardinality {
        k: usize,
    },
    UniformMatroid {
        k: usize,
    },
    PartitionMatroid {
        parts: Vec<Vec<usize>>,
        limits: Vec<usize>,
    },
    Packing {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    Knapsack {
        weights: Vec<f64>,
        budget: f64,
    },
}

impl TryFrom<ConstraintFile> for Constraint {
    type Error = Error;

    fn try_from(file: ConstraintFile) -> Result<Self> {
        Ok(match file {
            ConstraintFile::Cardinality { k } => CardinalityConstraint::new(k)?.into(),
            ConstraintFile::UniformMatroid { k } => Matroid::uniform(k)?.into(),
            ConstraintFile::PartitionMatroid { parts, limits } => {
                Matroid::partition(parts, limits)?.into()
            }
            ConstraintFile::Packing { a, b } => PackingConstraint::new(a, b)?.into(),
            ConstraintFile::Knapsack { weights, budget } => {
                KnapsackConstraint::new(weights, budget)?.into()
            }
        })
    }
}

impl From<Constraint> for ConstraintFile {
    fn from(c: Constraint) -> Self {
        match c {
            Constraint::Cardinality(c) => ConstraintFile::Cardinality { k: c.k },
            Constraint::Matroid(Matroid::Uniform { k }) => ConstraintFile::UniformMatroid { k },
            Constraint::Matroid(Matroid::Partition(p)) => ConstraintFile::PartitionMatroid {
                parts: p.parts().to_vec(),
                limits: p.limits().to_vec(),
            },
            Constraint::Packing(p) => ConstraintFile::Packing { a: p.a, b: p.b },
            Constraint::Knapsack(k) => ConstraintFile::Knapsack {
                weights: k.weights,
                budget: k.budget,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(v: &[usize]) -> IdSet {
        IdSet::from(v)
    }

    #[test]
    fn feasibility_examples() {
        let card: Constraint = CardinalityConstraint::new(2).unwrap().into();
        assert!(!card.is_feasible(&ids(&[0, 1, 2])).unwrap());
        assert!(card.is_feasible(&ids(&[0, 1])).unwrap());

        let packing: Constraint = PackingConstraint::new(vec![vec![0.5, 1.0]], vec![1.0])
            .unwrap()
            .into();
        assert!(!packing.is_feasible(&ids(&[0, 1])).unwrap());
        assert!(packing.is_feasible(&ids(&[1])).unwrap());

        let partition: Constraint = Matroid::partition(vec![vec![0, 1], vec![2, 3]], vec![1, 1])
            .unwrap()
            .into();
        assert!(partition.is_feasible(&ids(&[0, 2])).unwrap());
        assert!(!partition.is_feasible(&ids(&[0, 1])).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let packing = PackingConstraint::new(vec![vec![0.5, 1.0]], vec![1.0]).unwrap();
        assert!(matches!(
            packing.is_feasible(&ids(&[2])),
            Err(Error::MalformedInstance(_))
        ));
        let c: Constraint = packing.into();
        assert!(c.check_ground(3).is_err());
        assert!(c.check_ground(2).is_ok());
    }

    #[test]
    fn width_examples() {
        let w = |a: Vec<Vec<f64>>, b: Vec<f64>| PackingConstraint::new(a, b).unwrap().width();
        assert_eq!(w(vec![vec![0.5, 1.0]], vec![2.0]).unwrap(), 2.0);
        assert_eq!(w(vec![vec![1.0]], vec![1.0]).unwrap(), 1.0);
        assert_eq!(
            w(vec![vec![0.5, 1.0], vec![0.25, 1.0]], vec![2.0, 1.0]).unwrap(),
            1.0
        );
        assert!(matches!(
            w(vec![vec![0.0, 0.0]], vec![1.0]),
            Err(Error::UndefinedWidth)
        ));
    }

    #[test]
    fn packing_validation() {
        assert!(PackingConstraint::new(vec![vec![1.5]], vec![1.0]).is_err());
        assert!(PackingConstraint::new(vec![vec![0.5]], vec![0.5]).is_err());
        assert!(PackingConstraint::new(vec![vec![0.5], vec![0.5, 0.5]], vec![1.0, 1.0]).is_err());
        assert!(KnapsackConstraint::new(vec![1.0], 0.0).is_err());
        assert!(KnapsackConstraint::new(vec![-1.0], 1.0).is_err());
    }

    #[test]
    fn knapsack_normalization() {
        let k = KnapsackConstraint::new(vec![1.0, 1.0, 1.0], 2.0).unwrap();
        let p = k.to_packing().unwrap();
        assert_eq!(p.a(), &[vec![1.0, 1.0, 1.0]]);
        assert_eq!(p.b(), &[2.0]);

        let k = KnapsackConstraint::new(vec![5.0, 2.0, 1.0], 3.0).unwrap();
        assert_eq!(k.admissible(), ids(&[1, 2]));
        let p = k.to_packing().unwrap();
        assert_eq!(p.a(), &[vec![0.0, 1.0, 0.5]]);
        assert_eq!(p.b(), &[1.5]);

        let zero = KnapsackConstraint::new(vec![0.0, 0.0], 1.0).unwrap();
        assert!(zero.to_packing().is_none());
    }

    #[test]
    fn constraint_file_format() {
        let cases = [
            r#"{"type":"cardinality","k":3}"#,
            r#"{"type":"uniform-matroid","k":3}"#,
            r#"{"type":"partition-matroid","parts":[[0,1],[2,3]],"limits":[1,1]}"#,
            r#"{"type":"packing","A":[[0.5,1.0]],"b":[2.0]}"#,
            r#"{"type":"knapsack","weights":[3.0,1.0,1.0],"budget":3.0}"#,
        ];
        for text in cases {
            let c: Constraint = serde_json::from_str(text).unwrap();
            assert_eq!(serde_json::to_string(&c).unwrap(), text);
        }
        assert!(serde_json::from_str::<Constraint>(r#"{"type":"cardinality","k":0}"#).is_err());
    }

    proptest! {
        #[test]
        fn packing_feasibility_matches_direct_recount(
            rows in proptest::collection::vec(proptest::collection::vec(0.0f64..=1.0, 6), 1..4),
            caps in proptest::collection::vec(1.0f64..3.0, 4),
            mask in 0u64..64,
        ) {
            let m = rows.len();
            let p = PackingConstraint::new(rows.clone(), caps[..m].to_vec()).unwrap();
            let set = IdSet::from_mask(mask);
            let direct = (0..m).all(|i| {
                let load: f64 = (0..6).filter(|j| mask >> j & 1 == 1).map(|j| rows[i][j]).sum();
                load <= caps[i]
            });
            prop_assert_eq!(p.is_feasible(&set).unwrap(), direct);
        }
    }
}
