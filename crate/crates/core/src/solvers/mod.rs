//! Exact optimizers for decision trees over a single table, plus brute-force
//! oracles used to cross-check them.

mod det;
mod nondet;
pub mod oracle;

use serde::{Serialize, Serializer};

use crate::tree::DecisionTree;

pub use det::{min_depth_det, min_nodes_det, min_nodes_det_budgeted};
pub use nondet::{build_reduction_tree, min_depth_nondet, min_nodes_nondet};
pub use oracle::{
    exhaustive_det_oracle, exhaustive_nondet_oracle, nondet_min_nodes_within, OracleLimits, OracleMinima,
};

/// Memo entries allowed per solver call.
pub const MEMO_CAP: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimality {
    Exact,
    UpperBound,
    Infeasible,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub subproblems: u64,
    pub ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    /// Depth or node count of the witness; `None` when infeasible.
    pub objective: Option<u32>,
    pub optimality: Optimality,
    /// Proven lower bound, reported when the objective is not exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<u32>,
    #[serde(serialize_with = "tree_value")]
    pub tree: Option<DecisionTree>,
    pub stats: SolveStats,
}

fn tree_value<S: Serializer>(tree: &Option<DecisionTree>, s: S) -> Result<S::Ok, S::Error> {
    tree.as_ref().map(DecisionTree::to_value).serialize(s)
}

impl SolveResult {
    pub(crate) fn exact(objective: u32, tree: DecisionTree, stats: SolveStats) -> Self {
        SolveResult {
            objective: Some(objective),
            optimality: Optimality::Exact,
            lower_bound: None,
            tree: Some(tree),
            stats,
        }
    }

    pub(crate) fn infeasible(stats: SolveStats) -> Self {
        SolveResult {
            objective: None,
            optimality: Optimality::Infeasible,
            lower_bound: None,
            tree: None,
            stats,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization cannot fail")
    }

    /// The objective, panicking on infeasible results.
    pub fn value(&self) -> u32 {
        self.objective.expect("feasible result")
    }

    pub fn witness(&self) -> &DecisionTree {
        self.tree.as_ref().expect("feasible result")
    }
}

pub(crate) struct Stopwatch(std::time::Instant);

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch(std::time::Instant::now())
    }

    pub fn stats(&self, subproblems: u64) -> SolveStats {
        SolveStats {
            subproblems,
            ms: self.0.elapsed().as_millis() as u64,
        }
    }
}
