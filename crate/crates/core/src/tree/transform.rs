use super::{DecisionTree, Node, NodeId, Subtree};
use crate::table::DecisionTable;

/// Drops every node and edge that lies on no realizable complete path.
///
/// A path is realizable when at least one table row satisfies all of its
/// constraints. If no path is realizable the tree is returned unchanged.
pub fn prune_unrealizable(tree: &DecisionTree, table: &DecisionTable) -> DecisionTree {
    let mut keep = vec![false; tree.nodes().len()];
    for path in tree.complete_paths() {
        let realizable =
            path.constraints.iter().all(|&(a, _)| a < table.n()) && !table.matching(&path.constraints).is_empty();
        if realizable {
            for id in path.nodes {
                keep[id] = true;
            }
        }
    }
    let kids: Vec<Subtree> = tree
        .root_children()
        .iter()
        .filter(|&&c| keep[c])
        .map(|&c| kept_subtree(tree, c, &keep))
        .collect();
    if kids.is_empty() {
        return tree.clone();
    }
    DecisionTree::from_root_children(kids)
}

fn kept_subtree(tree: &DecisionTree, id: NodeId, keep: &[bool]) -> Subtree {
    match tree.node(id) {
        Node::Term { decision } => Subtree::Term(*decision),
        Node::Work { attr, edges } => Subtree::Work {
            attr: *attr,
            edges: edges
                .iter()
                .filter(|e| keep[e.to])
                .map(|e| (e.label, kept_subtree(tree, e.to, keep)))
                .collect(),
        },
        Node::Root { .. } => unreachable!("root below root"),
    }
}

/// Splices out every working node with exactly one leaving edge, wiring the
/// edge that entered it straight to its child.
pub fn collapse_single_child(tree: &DecisionTree) -> DecisionTree {
    DecisionTree::from_root_children(tree.root_subtrees().into_iter().map(collapse).collect())
}

fn collapse(s: Subtree) -> Subtree {
    match s {
        Subtree::Term(d) => Subtree::Term(d),
        Subtree::Work { attr, mut edges } => {
            if edges.len() == 1 {
                collapse(edges.pop().expect("one edge").1)
            } else {
                Subtree::Work {
                    attr,
                    edges: edges.into_iter().map(|(l, c)| (l, collapse(c))).collect(),
                }
            }
        }
    }
}
