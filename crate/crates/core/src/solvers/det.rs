//! Dynamic programs over row subsets for deterministic trees.
//!
//! A subproblem is the set of rows reaching a node. Only columns that split
//! the set are tried, and every working node gets both a 0-edge and a 1-edge.

use std::collections::HashMap;

use super::{SolveResult, Stopwatch, MEMO_CAP};
use crate::error::{Error, Result};
use crate::rowset::RowSet;
use crate::table::DecisionTable;
use crate::tree::{DecisionTree, Subtree};

struct Dp<'t> {
    table: &'t DecisionTable,
    depth: HashMap<RowSet, u32>,
    /// Keyed by (rows, remaining depth); `None` means unbounded.
    nodes: HashMap<(RowSet, Option<u32>), Option<u32>>,
}

impl<'t> Dp<'t> {
    fn new(table: &'t DecisionTable) -> Self {
        Dp {
            table,
            depth: HashMap::new(),
            nodes: HashMap::new(),
        }
    }

    fn explored(&self) -> u64 {
        (self.depth.len() + self.nodes.len()) as u64
    }

    fn check_cap(&self) -> Result<()> {
        if self.depth.len() + self.nodes.len() >= MEMO_CAP {
            return Err(Error::ResourceLimit(format!("solver memo exceeded {MEMO_CAP} entries")));
        }
        Ok(())
    }

    fn splits(&self, rows: &RowSet) -> Vec<(usize, RowSet, RowSet)> {
        (0..self.table.n())
            .filter_map(|c| {
                let (zero, one) = self.table.split(rows, c);
                (!zero.is_empty() && !one.is_empty()).then_some((c, zero, one))
            })
            .collect()
    }

    fn min_depth(&mut self, rows: &RowSet) -> Result<u32> {
        if self.table.is_homogeneous(rows) {
            return Ok(0);
        }
        if let Some(&h) = self.depth.get(rows) {
            return Ok(h);
        }
        self.check_cap()?;
        let mut best = u32::MAX;
        for (_, zero, one) in self.splits(rows) {
            let h = 1 + self.min_depth(&zero)?.max(self.min_depth(&one)?);
            best = best.min(h);
        }
        self.depth.insert(rows.clone(), best);
        Ok(best)
    }

    fn depth_tree(&mut self, rows: &RowSet) -> Result<Subtree> {
        if let Some(d) = self.table.common_decision(rows) {
            return Ok(Subtree::Term(d));
        }
        let target = self.min_depth(rows)?;
        for (c, zero, one) in self.splits(rows) {
            if 1 + self.min_depth(&zero)?.max(self.min_depth(&one)?) == target {
                return Ok(Subtree::work(
                    c,
                    vec![(0, self.depth_tree(&zero)?), (1, self.depth_tree(&one)?)],
                ));
            }
        }
        unreachable!("the memoized minimum is attained by some split")
    }

    /// Minimum node count of a subtree for `rows` within `budget` levels of
    /// working nodes.
    fn min_nodes(&mut self, rows: &RowSet, budget: Option<u32>) -> Result<Option<u32>> {
        if self.table.is_homogeneous(rows) {
            return Ok(Some(1));
        }
        if budget == Some(0) {
            return Ok(None);
        }
        let key = (rows.clone(), budget);
        if let Some(&v) = self.nodes.get(&key) {
            return Ok(v);
        }
        self.check_cap()?;
        let next = budget.map(|b| b - 1);
        let mut best: Option<u32> = None;
        for (_, zero, one) in self.splits(rows) {
            let (Some(a), Some(b)) = (self.min_nodes(&zero, next)?, self.min_nodes(&one, next)?) else {
                continue;
            };
            let cost = 1 + a + b;
            if best.is_none_or(|x| cost < x) {
                best = Some(cost);
            }
        }
        self.nodes.insert(key, best);
        Ok(best)
    }

    fn nodes_tree(&mut self, rows: &RowSet, budget: Option<u32>) -> Result<Subtree> {
        if let Some(d) = self.table.common_decision(rows) {
            return Ok(Subtree::Term(d));
        }
        let target = self.min_nodes(rows, budget)?.expect("feasible subproblem");
        let next = budget.map(|b| b - 1);
        for (c, zero, one) in self.splits(rows) {
            if let (Some(a), Some(b)) = (self.min_nodes(&zero, next)?, self.min_nodes(&one, next)?) {
                if 1 + a + b == target {
                    return Ok(Subtree::work(
                        c,
                        vec![(0, self.nodes_tree(&zero, next)?), (1, self.nodes_tree(&one, next)?)],
                    ));
                }
            }
        }
        unreachable!("the memoized minimum is attained by some split")
    }
}

/// Minimum depth over deterministic trees solving the table.
pub fn min_depth_det(table: &DecisionTable) -> Result<SolveResult> {
    let clock = Stopwatch::start();
    let mut dp = Dp::new(table);
    let all = table.all_rows();
    let h = dp.min_depth(&all)?;
    let tree = DecisionTree::deterministic(dp.depth_tree(&all)?);
    Ok(SolveResult::exact(h, tree, clock.stats(dp.explored())))
}

/// Minimum node count (root included) over deterministic trees solving the table.
pub fn min_nodes_det(table: &DecisionTable) -> Result<SolveResult> {
    solve_nodes(table, None)
}

/// Minimum node count over deterministic trees of depth at most `budget`.
pub fn min_nodes_det_budgeted(table: &DecisionTable, budget: u32) -> Result<SolveResult> {
    // Splitting only on non-constant columns never uses a column twice on a
    // path, so budgets of n or more add no constraint.
    let budget = (budget < table.n() as u32).then_some(budget);
    solve_nodes(table, budget)
}

fn solve_nodes(table: &DecisionTable, budget: Option<u32>) -> Result<SolveResult> {
    let clock = Stopwatch::start();
    let mut dp = Dp::new(table);
    let all = table.all_rows();
    match dp.min_nodes(&all, budget)? {
        None => Ok(SolveResult::infeasible(clock.stats(dp.explored()))),
        Some(cost) => {
            let tree = DecisionTree::deterministic(dp.nodes_tree(&all, budget)?);
            Ok(SolveResult::exact(1 + cost, tree, clock.stats(dp.explored())))
        }
    }
}
