//! Growable bitset of element ids.
//!
//! Sets cross module boundaries as sorted id lists (that is also how they
//! serialize); internally every solver works on `IdSet`.

use std::fmt;

use serde::{Deserialize, Serialize};

const WORD: usize = 64;

/// A set of element ids backed by 64-bit words.
///
/// Trailing zero words are never stored, so two sets with the same members
/// compare equal regardless of how they were built.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct IdSet {
    words: Vec<u64>,
}

impl IdSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// All ids in `0..n`.
    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n / WORD];
        if !n.is_multiple_of(WORD) {
            words.push((1u64 << (n % WORD)) - 1);
        }
        Self { words }
    }

    /// Set whose characteristic vector is the binary expansion of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut set = Self::default();
        set.set_mask(mask);
        set
    }

    /// Overwrites the set with `mask` without reallocating when possible.
    pub fn set_mask(&mut self, mask: u64) {
        self.words.clear();
        if mask != 0 {
            self.words.push(mask);
        }
    }

    /// Low 64 bits of the characteristic vector. Only meaningful when every
    /// member is below 64.
    pub fn low_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn contains(&self, id: usize) -> bool {
        self.words
            .get(id / WORD)
            .is_some_and(|w| w & (1u64 << (id % WORD)) != 0)
    }

    /// Returns `true` if `id` was not already present.
    pub fn insert(&mut self, id: usize) -> bool {
        let idx = id / WORD;
        if idx >= self.words.len() {
            self.words.resize(idx + 1, 0);
        }
        let bit = 1u64 << (id % WORD);
        let fresh = self.words[idx] & bit == 0;
        self.words[idx] |= bit;
        fresh
    }

    /// Returns `true` if `id` was present.
    pub fn remove(&mut self, id: usize) -> bool {
        let idx = id / WORD;
        let Some(word) = self.words.get_mut(idx) else {
            return false;
        };
        let bit = 1u64 << (id % WORD);
        let present = *word & bit != 0;
        *word &= !bit;
        self.trim();
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Largest member, if any.
    pub fn max(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD + (WORD - 1 - last.leading_zeros() as usize))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + bit)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &IdSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn union(&self, other: &IdSet) -> IdSet {
        let len = self.words.len().max(other.words.len());
        let words = (0..len).map(|i| self.word(i) | other.word(i)).collect();
        IdSet { words }
    }

    pub fn intersection(&self, other: &IdSet) -> IdSet {
        let len = self.words.len().min(other.words.len());
        let mut set = IdSet {
            words: (0..len).map(|i| self.word(i) & other.word(i)).collect(),
        };
        set.trim();
        set
    }

    pub fn difference(&self, other: &IdSet) -> IdSet {
        let mut set = IdSet {
            words: (0..self.words.len())
                .map(|i| self.word(i) & !other.word(i))
                .collect(),
        };
        set.trim();
        set
    }

    /// `0..n` minus this set.
    pub fn complement(&self, n: usize) -> IdSet {
        IdSet::full(n).difference(self)
    }

    /// Members strictly below `n`.
    pub fn truncated(&self, n: usize) -> IdSet {
        self.intersection(&IdSet::full(n))
    }

    fn word(&self, i: usize) -> u64 {
        self.words.get(i).copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<usize> for IdSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = IdSet::new();
        for id in iter {
            set.insert(id);
        }
        set
    }
}

impl From<Vec<usize>> for IdSet {
    fn from(ids: Vec<usize>) -> Self {
        ids.into_iter().collect()
    }
}

impl From<&[usize]> for IdSet {
    fn from(ids: &[usize]) -> Self {
        ids.iter().copied().collect()
    }
}

impl From<IdSet> for Vec<usize> {
    fn from(set: IdSet) -> Self {
        set.to_vec()
    }
}

impl fmt::Debug for IdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
