//! Exact minimum set cover over row sets.
//!
//! Used for minimum consistent rules and minimum same-solution subsystems:
//! the elements are the rows that must be excluded, the sets are the
//! candidate constraints.

use crate::error::{Error, Result};
use crate::rowset::RowSet;

/// Search nodes allowed per cover computation before giving up.
pub const DEFAULT_NODE_CAP: u64 = 50_000_000;

pub(crate) struct SetCover<'a> {
    sets: &'a [RowSet],
    node_cap: u64,
    nodes: u64,
}

impl<'a> SetCover<'a> {
    pub fn new(sets: &'a [RowSet]) -> Self {
        SetCover {
            sets,
            node_cap: DEFAULT_NODE_CAP,
            nodes: 0,
        }
    }

    /// Lexicographically smallest index set among the minimum covers of
    /// `target`. `None` when the sets cannot cover it.
    pub fn minimum(&mut self, target: &RowSet) -> Result<Option<Vec<usize>>> {
        let Some(upper) = self.greedy(target) else {
            return Ok(None);
        };
        let mut size = upper.len();
        for k in self.lower_bound(target, 0)..upper.len() {
            if self.feasible(target, 0, k)? {
                size = k;
                break;
            }
        }
        // Fix the smallest usable index at each position in turn.
        let mut chosen = Vec::with_capacity(size);
        let mut uncovered = target.clone();
        let mut from = 0;
        while !uncovered.is_empty() {
            let left = size - chosen.len() - 1;
            let next = (from..self.sets.len())
                .find_map(
                    |s| match self.feasible(&uncovered.difference(&self.sets[s]), s + 1, left) {
                        Ok(true) => Some(Ok(s)),
                        Ok(false) => None,
                        Err(e) => Some(Err(e)),
                    },
                )
                .expect("a cover of the minimum size exists")?;
            uncovered = uncovered.difference(&self.sets[next]);
            chosen.push(next);
            from = next + 1;
        }
        debug_assert_eq!(chosen.len(), size);
        Ok(Some(chosen))
    }

    fn greedy(&self, target: &RowSet) -> Option<Vec<usize>> {
        let mut uncovered = target.clone();
        let mut picked = Vec::new();
        while !uncovered.is_empty() {
            let (best, gain) = self
                .sets
                .iter()
                .enumerate()
                .map(|(i, s)| (i, s.intersection(&uncovered).len()))
                .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if gain == 0 {
                return None;
            }
            uncovered = uncovered.difference(&self.sets[best]);
            picked.push(best);
        }
        picked.sort_unstable();
        Some(picked)
    }

    fn lower_bound(&self, uncovered: &RowSet, from: usize) -> usize {
        let n = uncovered.len();
        if n == 0 {
            return 0;
        }
        let widest = self.sets[from.min(self.sets.len())..]
            .iter()
            .map(|s| s.intersection(uncovered).len())
            .max()
            .unwrap_or(0);
        if widest == 0 {
            usize::MAX
        } else {
            n.div_ceil(widest)
        }
    }

    /// Can `uncovered` be covered by at most `budget` sets with index ≥ `from`?
    fn feasible(&mut self, uncovered: &RowSet, from: usize, budget: usize) -> Result<bool> {
        if uncovered.is_empty() {
            return Ok(true);
        }
        if budget == 0 || self.lower_bound(uncovered, from) > budget {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Error::ResourceLimit(format!(
                "set cover search exceeded {} nodes",
                self.node_cap
            )));
        }
        // Branch on the element with the fewest candidate sets.
        let mut branch: Option<Vec<usize>> = None;
        for e in uncovered.iter() {
            let cands: Vec<usize> = (from..self.sets.len()).filter(|&s| self.sets[s].contains(e)).collect();
            if cands.is_empty() {
                return Ok(false);
            }
            if branch.as_ref().is_none_or(|b| cands.len() < b.len()) {
                branch = Some(cands);
            }
        }
        for s in branch.expect("uncovered is nonempty") {
            if self.feasible(&uncovered.difference(&self.sets[s]), from, budget - 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(target: &RowSet, sets: &[RowSet]) -> Option<Vec<usize>> {
        let m = sets.len();
        let mut best: Option<Vec<usize>> = None;
        for mask in 0u32..1 << m {
            let pick: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let covered = pick
                .iter()
                .fold(RowSet::empty(target.universe()), |acc, &i| acc.union(&sets[i]));
            if target.is_subset(&covered) {
                let better = match &best {
                    None => true,
                    Some(b) => (pick.len(), &pick) < (b.len(), b),
                };
                if better {
                    best = Some(pick);
                }
            }
        }
        best
    }

    #[test]
    fn prefers_lexicographically_smallest_minimum() {
        let u = 4;
        let sets = vec![
            RowSet::from_indices(u, [0, 1]),
            RowSet::from_indices(u, [2, 3]),
            RowSet::from_indices(u, [0, 1, 2, 3]),
        ];
        let target = RowSet::full(u);
        assert_eq!(SetCover::new(&sets).minimum(&target).unwrap(), Some(vec![2]));
        let sets = vec![
            RowSet::from_indices(u, [1, 2]),
            RowSet::from_indices(u, [0, 3]),
            RowSet::from_indices(u, [0, 1]),
            RowSet::from_indices(u, [2, 3]),
        ];
        assert_eq!(SetCover::new(&sets).minimum(&target).unwrap(), Some(vec![0, 1]));
        assert_eq!(SetCover::new(&sets).minimum(&RowSet::empty(u)).unwrap(), Some(vec![]));
        let sparse = vec![RowSet::from_indices(u, [0])];
        assert_eq!(SetCover::new(&sparse).minimum(&target).unwrap(), None);
    }

    proptest! {
        #[test]
        fn matches_subset_enumeration(
            raw in prop::collection::vec(prop::collection::btree_set(0usize..7, 0..5), 1..8),
            target in prop::collection::btree_set(0usize..7, 0..7),
        ) {
            let sets: Vec<RowSet> = raw.iter().map(|s| RowSet::from_indices(7, s.iter().copied())).collect();
            let target = RowSet::from_indices(7, target);
            prop_assert_eq!(SetCover::new(&sets).minimum(&target).unwrap(), brute_force(&target, &sets));
        }
    }
}
