//! Decision trees with an unlabeled root, attribute-labeled working nodes,
//! 0/1-labeled edges and decision-labeled terminals.
//!
//! Trees are stored as an id-indexed arena. Every node except the root has
//! exactly one entering edge, so an edge is identified by its target node.
//! Attribute indices are 0-based columns of the table the tree is checked
//! against.

mod class;
mod io;
mod transform;

pub use class::{is_full_subtree, tree_class, TreeClass};
pub use io::TREE_FORMAT;
pub use transform::{collapse_single_child, prune_unrealizable};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rowset::RowSet;
use crate::table::DecisionTable;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: u8,
    pub to: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Root { edges: Vec<NodeId> },
    Work { attr: usize, edges: Vec<Edge> },
    Term { decision: u32 },
}

/// Owned recursive form of everything below the root. Handy for building
/// and rewriting trees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subtree {
    Term(u32),
    Work { attr: usize, edges: Vec<(u8, Subtree)> },
}

impl Subtree {
    pub fn work(attr: usize, edges: Vec<(u8, Subtree)>) -> Self {
        Subtree::Work { attr, edges }
    }

    /// A chain of working nodes following `constraints`, ending in `decision`.
    pub fn chain(constraints: &[(usize, bool)], decision: u32) -> Self {
        constraints.iter().rev().fold(Subtree::Term(decision), |acc, &(c, v)| {
            Subtree::work(c, vec![(v as u8, acc)])
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    root: NodeId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TreeMetrics {
    /// Total node count, root included.
    #[serde(rename = "L")]
    pub nodes: usize,
    #[serde(rename = "L_t")]
    pub terminals: usize,
    #[serde(rename = "L_w")]
    pub working: usize,
    /// Largest number of working nodes on a complete path.
    #[serde(rename = "h")]
    pub depth: usize,
}

/// A root-to-terminal path and the `(attribute, value)` constraints along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletePath {
    pub nodes: Vec<NodeId>,
    pub constraints: Vec<(usize, bool)>,
    pub decision: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Det,
    Nondet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<NodeId>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub mode: SolveMode,
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl DecisionTree {
    /// Root with one edge per given subtree.
    pub fn from_root_children(children: Vec<Subtree>) -> Self {
        assert!(!children.is_empty(), "the root needs at least one edge");
        let mut nodes = vec![Node::Root { edges: Vec::new() }];
        let edges = children.into_iter().map(|c| push_subtree(&mut nodes, c)).collect();
        nodes[0] = Node::Root { edges };
        DecisionTree { nodes, root: 0 }
    }

    /// Deterministic root: a single edge into `child`.
    pub fn deterministic(child: Subtree) -> Self {
        Self::from_root_children(vec![child])
    }

    /// Checks the structural invariants and builds the tree.
    pub fn from_nodes(nodes: Vec<Node>, root: NodeId) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedTree(m));
        if root >= nodes.len() {
            return bad(format!("root id {root} out of range"));
        }
        let mut parents = vec![0usize; nodes.len()];
        for (id, node) in nodes.iter().enumerate() {
            let targets: Vec<NodeId> = match node {
                Node::Root { edges } => {
                    if id != root {
                        return bad(format!("node {id} is a second root"));
                    }
                    if edges.is_empty() {
                        return bad("root has no leaving edges".into());
                    }
                    edges.clone()
                }
                Node::Work { edges, .. } => {
                    if edges.is_empty() {
                        return bad(format!("working node {id} has no leaving edges"));
                    }
                    if let Some(e) = edges.iter().find(|e| e.label > 1) {
                        return bad(format!("edge label {} at node {id}", e.label));
                    }
                    edges.iter().map(|e| e.to).collect()
                }
                Node::Term { decision } => {
                    if *decision == 0 {
                        return bad(format!("terminal {id} has decision 0"));
                    }
                    Vec::new()
                }
            };
            for t in targets {
                if t >= nodes.len() {
                    return bad(format!("edge from {id} to missing node {t}"));
                }
                parents[t] += 1;
            }
        }
        if !matches!(nodes[root], Node::Root { .. }) {
            return bad(format!("node {root} is not a root"));
        }
        if parents[root] != 0 {
            return bad("the root has an entering edge".into());
        }
        if let Some(id) = (0..nodes.len()).find(|&i| i != root && parents[i] != 1) {
            return bad(format!("node {id} has {} entering edges", parents[id]));
        }
        let tree = DecisionTree { nodes, root };
        // With one parent per node, unreachable nodes can only sit on cycles.
        if tree.preorder().len() != tree.nodes.len() {
            return bad("tree contains a cycle".into());
        }
        Ok(tree)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn root_children(&self) -> &[NodeId] {
        match &self.nodes[self.root] {
            Node::Root { edges } => edges,
            _ => unreachable!("root id points at a root node"),
        }
    }

    /// Target nodes of the edges leaving `id`, in stored order.
    pub fn children(&self, id: NodeId) -> Vec<NodeId> {
        match &self.nodes[id] {
            Node::Root { edges } => edges.clone(),
            Node::Work { edges, .. } => edges.iter().map(|e| e.to).collect(),
            Node::Term { .. } => Vec::new(),
        }
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            order.push(id);
            let mut kids = self.children(id);
            kids.reverse();
            stack.extend(kids);
        }
        order
    }

    /// Recursive form of the subtree hanging below node `id` (not the root).
    pub fn subtree(&self, id: NodeId) -> Subtree {
        match &self.nodes[id] {
            Node::Term { decision } => Subtree::Term(*decision),
            Node::Work { attr, edges } => Subtree::Work {
                attr: *attr,
                edges: edges.iter().map(|e| (e.label, self.subtree(e.to))).collect(),
            },
            Node::Root { .. } => panic!("the root is not a subtree"),
        }
    }

    pub fn root_subtrees(&self) -> Vec<Subtree> {
        self.root_children().iter().map(|&c| self.subtree(c)).collect()
    }

    pub fn metrics(&self) -> TreeMetrics {
        let terminals = self.nodes.iter().filter(|n| matches!(n, Node::Term { .. })).count();
        let working = self.nodes.iter().filter(|n| matches!(n, Node::Work { .. })).count();
        TreeMetrics {
            nodes: self.nodes.len(),
            terminals,
            working,
            depth: self.depth_below(self.root),
        }
    }

    fn depth_below(&self, id: NodeId) -> usize {
        let own = usize::from(matches!(self.nodes[id], Node::Work { .. }));
        own + self
            .children(id)
            .into_iter()
            .map(|c| self.depth_below(c))
            .max()
            .unwrap_or(0)
    }

    pub fn max_attribute(&self) -> Option<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Work { attr, .. } => Some(*attr),
                _ => None,
            })
            .max()
    }

    /// All complete paths, depth-first in stored edge order.
    pub fn complete_paths(&self) -> Vec<CompletePath> {
        let mut out = Vec::new();
        let mut nodes = vec![self.root];
        let mut constraints = Vec::new();
        for &c in self.root_children() {
            self.collect_paths(c, &mut nodes, &mut constraints, &mut out);
        }
        out
    }

    fn collect_paths(
        &self,
        id: NodeId,
        nodes: &mut Vec<NodeId>,
        constraints: &mut Vec<(usize, bool)>,
        out: &mut Vec<CompletePath>,
    ) {
        nodes.push(id);
        match &self.nodes[id] {
            Node::Term { decision } => out.push(CompletePath {
                nodes: nodes.clone(),
                constraints: constraints.clone(),
                decision: *decision,
            }),
            Node::Work { attr, edges } => {
                for e in edges {
                    constraints.push((*attr, e.label == 1));
                    self.collect_paths(e.to, nodes, constraints, out);
                    constraints.pop();
                }
            }
            Node::Root { .. } => unreachable!("root below root"),
        }
        nodes.pop();
    }

    /// One root edge and distinct labels
    /// on the edges leaving each working node.
    pub fn is_deterministic(&self) -> bool {
        self.root_children().len() == 1
            && self.nodes.iter().all(|n| match n {
                Node::Work { edges, .. } => (0..=1u8).all(|l| edges.iter().filter(|e| e.label == l).count() <= 1),
                _ => true,
            })
    }
}

fn push_subtree(nodes: &mut Vec<Node>, s: Subtree) -> NodeId {
    match s {
        Subtree::Term(d) => {
            nodes.push(Node::Term { decision: d });
            nodes.len() - 1
        }
        Subtree::Work { attr, edges } => {
            let id = nodes.len();
            nodes.push(Node::Work {
                attr,
                edges: Vec::new(),
            });
            let built = edges
                .into_iter()
                .map(|(label, child)| Edge {
                    label,
                    to: push_subtree(nodes, child),
                })
                .collect();
            nodes[id] = Node::Work { attr, edges: built };
            id
        }
    }
}

/// Rows of `table` satisfying every constraint of `path`.
pub fn path_rowset(path: &CompletePath, table: &DecisionTable) -> Result<RowSet> {
    if let Some(&(attr, _)) = path.constraints.iter().find(|(a, _)| *a >= table.n()) {
        return Err(Error::AttributeOutOfRange { attr, n: table.n() });
    }
    Ok(table.matching(&path.constraints))
}

/// Checks whether `tree` solves `table` in the given mode.
///
/// Nondeterministic solving needs every row covered by some complete path
/// and every path that a row satisfies to end in that row's decision.
/// Deterministic solving additionally needs a single root edge and distinct
/// labels on sibling edges below each working node.
pub fn validate(tree: &DecisionTree, table: &DecisionTable, mode: SolveMode) -> VerificationReport {
    let mut violations = Vec::new();
    let node_violation = |node: NodeId, reason: String| Violation {
        row: None,
        path: None,
        node: Some(node),
        reason,
    };
    for (id, node) in tree.nodes.iter().enumerate() {
        match node {
            Node::Work { attr, .. } if *attr >= table.n() => violations.push(node_violation(
                id,
                format!("attribute f{attr} out of range for {} columns", table.n()),
            )),
            _ => {}
        }
    }
    if !violations.is_empty() {
        return VerificationReport {
            mode,
            ok: false,
            violations,
        };
    }
    if mode == SolveMode::Det {
        let out = tree.root_children().len();
        if out != 1 {
            violations.push(node_violation(tree.root, format!("root has {out} leaving edges")));
        }
        for (id, node) in tree.nodes.iter().enumerate() {
            if let Node::Work { edges, .. } = node {
                for label in 0..=1u8 {
                    let k = edges.iter().filter(|e| e.label == label).count();
                    if k > 1 {
                        violations.push(node_violation(id, format!("{k} leaving edges labeled {label}")));
                    }
                }
            }
        }
    }
    let mut covered = table.no_rows();
    for (p, path) in tree.complete_paths().iter().enumerate() {
        let rows = table.matching(&path.constraints);
        for r in rows.iter() {
            let want = table.decision(r);
            if want != path.decision {
                violations.push(Violation {
                    row: Some(r),
                    path: Some(p),
                    node: path.nodes.last().copied(),
                    reason: format!(
                        "row {} reaches a terminal labeled {} but its decision is {want}",
                        table.rows()[r].tuple_string(),
                        path.decision
                    ),
                });
            }
        }
        covered = covered.union(&rows);
    }
    for r in table.all_rows().difference(&covered).iter() {
        violations.push(Violation {
            row: Some(r),
            path: None,
            node: None,
            reason: format!(
                "row {} is not covered by any complete path",
                table.rows()[r].tuple_string()
            ),
        });
    }
    VerificationReport {
        mode,
        ok: violations.is_empty(),
        violations,
    }
}

/// Shorthand for `validate(..).ok`.
pub fn solves(tree: &DecisionTree, table: &DecisionTable, mode: SolveMode) -> bool {
    validate(tree, table, mode).ok
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::table::table_from_strs;

    pub fn t1_2() -> DecisionTable {
        table_from_strs(&[("00", 1), ("10", 2), ("11", 3)]).unwrap()
    }

    /// root → f0 {0 → 1, 1 → f1 {0 → 2, 1 → 3}}
    pub fn t1_2_optimal() -> DecisionTree {
        DecisionTree::deterministic(Subtree::work(
            0,
            vec![
                (0, Subtree::Term(1)),
                (1, Subtree::work(1, vec![(0, Subtree::Term(2)), (1, Subtree::Term(3))])),
            ],
        ))
    }

    /// Three rule paths hanging off the root.
    pub fn t1_2_merged_rules() -> DecisionTree {
        DecisionTree::from_root_children(vec![
            Subtree::chain(&[(0, false)], 1),
            Subtree::chain(&[(0, true), (1, false)], 2),
            Subtree::chain(&[(1, true)], 3),
        ])
    }

    pub fn full_binary(d: [u32; 4]) -> DecisionTree {
        DecisionTree::deterministic(Subtree::work(
            0,
            vec![
                (
                    0,
                    Subtree::work(1, vec![(0, Subtree::Term(d[0])), (1, Subtree::Term(d[1]))]),
                ),
                (
                    1,
                    Subtree::work(1, vec![(0, Subtree::Term(d[2])), (1, Subtree::Term(d[3]))]),
                ),
            ],
        ))
    }
}
