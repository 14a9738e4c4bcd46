//! Nondeterministic trees built from decision rules.
//!
//! A nondeterministic tree of depth d gives every row a consistent rule of
//! length at most d (its covering path), and a set of per-row rules merged at
//! a shared root is such a tree. So the minimum depth is the longest
//! per-row minimum rule.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::oracle::{self, OracleLimits};
use super::{min_nodes_det, Optimality, SolveResult, Stopwatch};
use crate::analysis::{min_consistent_rule, min_same_solution_subsystem, Rule};
use crate::error::Result;
use crate::table::DecisionTable;
use crate::tree::{DecisionTree, Subtree};

/// Root with one chain per distinct (constraints, decision) path, in
/// first-seen order.
fn merge_paths(paths: Vec<(Vec<(usize, bool)>, u32)>) -> DecisionTree {
    let mut seen = BTreeSet::new();
    let chains = paths
        .into_iter()
        .filter(|p| seen.insert(p.clone()))
        .map(|(cs, d)| Subtree::chain(&cs, d))
        .collect();
    DecisionTree::from_root_children(chains)
}

/// Minimum depth over nondeterministic trees solving the table.
pub fn min_depth_nondet(table: &DecisionTable) -> Result<SolveResult> {
    let clock = Stopwatch::start();
    let rules = (0..table.len())
        .into_par_iter()
        .map(|r| min_consistent_rule(table, r).map(|rule| (rule.constraints, table.decision(r))))
        .collect::<Result<Vec<_>>>()?;
    let depth = rules.iter().map(|(cs, _)| cs.len() as u32).max().unwrap_or(0);
    let tree = merge_paths(rules);
    Ok(SolveResult::exact(depth, tree, clock.stats(table.len() as u64)))
}

/// One path per row, carrying a minimum subsystem of its full assignment,
/// all hanging from one root. The objective is the node count; the result
/// is a construction, not an optimum.
pub fn build_reduction_tree(table: &DecisionTable) -> Result<SolveResult> {
    let clock = Stopwatch::start();
    let paths = (0..table.len())
        .into_par_iter()
        .map(|r| {
            min_same_solution_subsystem(table, &Rule::full_row(table, r)).map(|s| (s.constraints, table.decision(r)))
        })
        .collect::<Result<Vec<_>>>()?;
    let tree = merge_paths(paths);
    let nodes = tree.metrics().nodes as u32;
    Ok(SolveResult {
        objective: Some(nodes),
        optimality: Optimality::UpperBound,
        lower_bound: None,
        tree: Some(tree),
        stats: clock.stats(table.len() as u64),
    })
}

/// Minimum node count over nondeterministic trees solving the table.
///
/// Any optimal tree has at least one terminal per distinct decision (one per
/// row when decisions are injective) and at least `L_t − 1` working nodes,
/// so `2 · #decisions` is a lower bound. When the deterministic optimum
/// meets it the answer is exact; otherwise small tables go to the
/// exhaustive search and larger ones get an upper bound.
pub fn min_nodes_nondet(table: &DecisionTable) -> Result<SolveResult> {
    let clock = Stopwatch::start();
    let det = min_nodes_det(table)?;
    let lower = 2 * table.distinct_decisions().len() as u32;
    if det.value() == lower {
        return Ok(SolveResult {
            stats: clock.stats(det.stats.subproblems),
            ..det
        });
    }
    let limits = OracleLimits::default();
    if table.n() <= limits.max_columns && table.len() <= limits.max_rows {
        let found = oracle::nondet_min_nodes_within(table, table.n() as u32, &limits)?;
        let (nodes, tree) = found.expect("an unbounded search always finds a tree");
        return Ok(SolveResult::exact(nodes, tree, clock.stats(det.stats.subproblems)));
    }
    Ok(SolveResult {
        optimality: Optimality::UpperBound,
        lower_bound: Some(lower),
        stats: clock.stats(det.stats.subproblems),
        ..det
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{generate, AttributeFamily, Labeling};
    use crate::table::table_from_strs;
    use crate::tree::{solves, tree_class, SolveMode};

    fn fam(f: AttributeFamily, n: usize) -> DecisionTable {
        generate(&f, &(1..=n).collect::<Vec<_>>(), &Labeling::Injective).unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(
            min_depth_nondet(&fam(AttributeFamily::threshold(), 4)).unwrap().value(),
            2
        );
        assert_eq!(
            min_depth_nondet(&fam(AttributeFamily::threshold(), 1)).unwrap().value(),
            1
        );
        assert_eq!(min_depth_nondet(&fam(AttributeFamily::point(), 3)).unwrap().value(), 3);
        let t = fam(AttributeFamily::threshold(), 6);
        let r = min_depth_nondet(&t).unwrap();
        assert!(solves(r.witness(), &t, SolveMode::Nondet));
        assert_eq!(r.witness().metrics().depth, 2);
    }

    #[test]
    fn reduction_tree_examples() {
        let t = fam(AttributeFamily::threshold(), 2);
        let r = build_reduction_tree(&t).unwrap();
        let tree = r.witness();
        let m = tree.metrics();
        assert_eq!((m.depth, m.nodes), (2, 8));
        assert_eq!(r.value(), 8);
        assert!(solves(tree, &t, SolveMode::Nondet));
        let paths: Vec<_> = tree
            .complete_paths()
            .into_iter()
            .map(|p| (p.constraints, p.decision))
            .collect();
        assert_eq!(
            paths,
            vec![
                (vec![(0, false)], 1),
                (vec![(0, true), (1, false)], 2),
                (vec![(1, true)], 3)
            ]
        );

        let single = table_from_strs(&[("01", 5)]).unwrap();
        let m = build_reduction_tree(&single).unwrap().witness().metrics();
        assert_eq!((m.depth, m.nodes), (0, 2));
        // Subsystems keep each row's solution set, not just its decision, so
        // a constant table with several rows still gets one path per row.
        let constant = table_from_strs(&[("00", 5), ("01", 5), ("11", 5)]).unwrap();
        let r = build_reduction_tree(&constant).unwrap();
        assert_eq!(r.witness().complete_paths().len(), 3);
        assert!(solves(r.witness(), &constant, SolveMode::Nondet));

        let cube = fam(AttributeFamily::Full, 2);
        let m = build_reduction_tree(&cube).unwrap().witness().metrics();
        assert_eq!((m.depth, m.nodes), (2, 13));
    }

    #[test]
    fn node_examples() {
        let r = min_nodes_nondet(&fam(AttributeFamily::threshold(), 3)).unwrap();
        assert_eq!((r.value(), r.optimality), (8, Optimality::Exact));
        assert!(tree_class(r.witness()).in_g_d2);
        let constant = table_from_strs(&[("00", 5), ("01", 5)]).unwrap();
        assert_eq!(min_nodes_nondet(&constant).unwrap().value(), 2);
        assert_eq!(min_nodes_nondet(&fam(AttributeFamily::Full, 2)).unwrap().value(), 8);
    }

    #[test]
    fn non_injective_small_tables_use_the_oracle() {
        // Decision 1 on 000 and 011 only: a single rule f0=0 ∧ ... is not enough
        // for a deterministic tree to match the lower bound.
        let t = table_from_strs(&[("000", 1), ("011", 1), ("001", 2), ("010", 2), ("100", 1)]).unwrap();
        let r = min_nodes_nondet(&t).unwrap();
        assert_eq!(r.optimality, Optimality::Exact);
        assert!(r.value() <= min_nodes_det(&t).unwrap().value());
        assert!(solves(r.witness(), &t, SolveMode::Nondet));
        assert_eq!(r.witness().metrics().nodes as u32, r.value());
    }
}
