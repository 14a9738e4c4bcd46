//! Fixed-universe bit sets over table row indices.

use std::fmt;

/// A set of row indices drawn from `0..universe`.
///
/// Equality and hashing are bit-level, so a `RowSet` is usable directly as a
/// memo key. Two sets over different universes never compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowSet {
    universe: usize,
    words: Box<[u64]>,
}

impl RowSet {
    pub fn empty(universe: usize) -> Self {
        RowSet {
            universe,
            words: vec![0; universe.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "row {i} outside universe {}", self.universe);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn intersection(&self, other: &RowSet) -> RowSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &RowSet) -> RowSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &RowSet) -> RowSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &RowSet) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &RowSet) -> bool {
        self.words.iter().zip(other.words.iter()).any(|(a, b)| a & b != 0)
    }

    fn zip_with(&self, other: &RowSet, f: impl Fn(u64, u64) -> u64) -> RowSet {
        debug_assert_eq!(self.universe, other.universe);
        RowSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl fmt::Debug for RowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn crosses_word_boundary() {
        let s = RowSet::from_indices(130, [0, 63, 64, 129]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(s.len(), 4);
        assert!(!s.contains(1));
        assert_eq!(RowSet::full(130).len(), 130);
    }

    proptest! {
        #[test]
        fn set_algebra_matches_btreeset(
            a in proptest::collection::btree_set(0usize..100, 0..40),
            b in proptest::collection::btree_set(0usize..100, 0..40),
        ) {
            let sa = RowSet::from_indices(100, a.iter().copied());
            let sb = RowSet::from_indices(100, b.iter().copied());
            let inter: Vec<_> = a.intersection(&b).copied().collect();
            let diff: Vec<_> = a.difference(&b).copied().collect();
            let uni: Vec<_> = a.union(&b).copied().collect();
            prop_assert_eq!(sa.intersection(&sb).iter().collect::<Vec<_>>(), inter);
            prop_assert_eq!(sa.difference(&sb).iter().collect::<Vec<_>>(), diff);
            prop_assert_eq!(sa.union(&sb).iter().collect::<Vec<_>>(), uni);
            prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));
            prop_assert_eq!(sa.intersects(&sb), !a.is_disjoint(&b));
        }
    }
}
