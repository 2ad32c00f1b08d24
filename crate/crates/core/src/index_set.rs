//! Finite sets of frequency indices drawn from an ambient range `[1, n]`.
//!
//! Selections, residue classes, and rearrangement blocks are all index sets.
//! Elements are kept sorted ascending, which makes iteration order (and hence
//! every downstream computation) deterministic.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A sorted set of distinct indices in `[1, n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    ambient: u32,
    elems: Vec<u32>,
}

impl IndexSet {
    /// Builds a set from arbitrary iteration order; sorts, and rejects
    /// duplicates or indices outside `[1, ambient]`.
    pub fn new(ambient: u32, elems: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut v: Vec<u32> = elems.into_iter().collect();
        v.sort_unstable();
        for pair in v.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateIndex(pair[0]));
            }
        }
        if let Some(&last) = v.last() {
            let first = v[0];
            if first < 1 || last > ambient {
                let bad = if first < 1 { first } else { last };
                return Err(Error::IndexOutOfRange(bad, ambient));
            }
        }
        Ok(IndexSet { ambient, elems: v })
    }

    /// The empty set over `[1, ambient]`.
    pub fn empty(ambient: u32) -> Self {
        IndexSet { ambient, elems: Vec::new() }
    }

    /// The full range `{1, ..., ambient}`.
    pub fn full(ambient: u32) -> Self {
        IndexSet { ambient, elems: (1..=ambient).collect() }
    }

    /// Internal constructor for values already sorted, distinct, and in range.
    pub(crate) fn from_sorted_unchecked(ambient: u32, elems: Vec<u32>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.iter().all(|&k| k >= 1 && k <= ambient));
        IndexSet { ambient, elems }
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, k: u32) -> bool {
        self.elems.binary_search(&k).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elems.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.elems
    }

    /// Inserts `k`, keeping order; errors if out of range, no-op if present.
    pub fn insert(&mut self, k: u32) -> Result<()> {
        if k < 1 || k > self.ambient {
            return Err(Error::IndexOutOfRange(k, self.ambient));
        }
        if let Err(pos) = self.elems.binary_search(&k) {
            self.elems.insert(pos, k);
        }
        Ok(())
    }

    /// Removes `k` if present; returns whether it was.
    pub fn remove(&mut self, k: u32) -> bool {
        match self.elems.binary_search(&k) {
            Ok(pos) => {
                self.elems.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// Set union. Both operands must share the ambient range.
    pub fn union(&self, other: &IndexSet) -> Result<IndexSet> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.elems.len() || j < other.elems.len() {
            match (self.elems.get(i), other.elems.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    out.push(a);
                    i += 1;
                    j += 1;
                }
                (Some(&a), Some(&b)) if a < b => {
                    out.push(a);
                    i += 1;
                }
                (Some(_), Some(&b)) => {
                    out.push(b);
                    j += 1;
                }
                (Some(&a), None) => {
                    out.push(a);
                    i += 1;
                }
                (None, Some(&b)) => {
                    out.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Ok(IndexSet { ambient: self.ambient, elems: out })
    }

    /// Elements of `self` not in `other` (compared by value; the result keeps
    /// `self`'s ambient range).
    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        let elems = self.elems.iter().copied().filter(|&k| !other.contains(k)).collect();
        IndexSet { ambient: self.ambient, elems }
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        let elems = self.elems.iter().copied().filter(|&k| other.contains(k)).collect();
        IndexSet { ambient: self.ambient, elems }
    }

    /// Complement within the ambient range.
    pub fn complement(&self) -> IndexSet {
        let elems = (1..=self.ambient).filter(|&k| !self.contains(k)).collect();
        IndexSet { ambient: self.ambient, elems }
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        // Walk the shorter set, probe the longer one.
        let (small, large) =
            if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter().all(|k| !large.contains(k))
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.iter().all(|k| other.contains(k))
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.elems.len()))?;
        for k in &self.elems {
            seq.serialize_element(k)?;
        }
        seq.end()
    }
}
