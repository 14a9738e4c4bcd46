use serde::Serialize;

use super::{DecisionTree, Node, NodeId};

/// Membership in the nested tree classes `G_d² ⊆ G_d ⊆ G_a^f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TreeClass {
    /// Deterministic.
    pub in_g_d: bool,
    /// Deterministic with exactly two leaving edges at every working node.
    pub in_g_d2: bool,
    /// No full subtree below a fan-out of two or more same-label edges, and
    /// none below a root fan-out of two or more edges.
    pub in_g_a_f: bool,
}

/// Whether the subtree entered by the edge into `edge_target` is full: some
/// set of edge deletions inside it leaves a tree whose leaves are all
/// terminals and whose working nodes keep exactly one 0-edge and one 1-edge.
///
/// Deleting edges below different children is independent, so a working
/// node is full iff it has a 0-edge into a full subtree and a 1-edge into a
/// full subtree. A bare terminal is full (empty deletion set).
pub fn is_full_subtree(tree: &DecisionTree, edge_target: NodeId) -> bool {
    full_flags(tree)[edge_target]
}

fn full_flags(tree: &DecisionTree) -> Vec<bool> {
    let mut full = vec![false; tree.nodes().len()];
    for id in tree.preorder().into_iter().rev() {
        full[id] = match tree.node(id) {
            Node::Term { .. } => true,
            Node::Work { edges, .. } => (0..=1u8).all(|l| edges.iter().any(|e| e.label == l && full[e.to])),
            Node::Root { .. } => false,
        };
    }
    full
}

pub fn tree_class(tree: &DecisionTree) -> TreeClass {
    let in_g_d = tree.is_deterministic();
    let in_g_d2 = in_g_d
        && tree.nodes().iter().all(|n| match n {
            Node::Work { edges, .. } => edges.len() == 2,
            _ => true,
        });
    let full = full_flags(tree);
    let root_ok = {
        let kids = tree.root_children();
        kids.len() < 2 || kids.iter().all(|&k| !full[k])
    };
    let work_ok = tree.nodes().iter().all(|n| match n {
        Node::Work { edges, .. } => (0..=1u8).all(|l| {
            let same: Vec<_> = edges.iter().filter(|e| e.label == l).collect();
            same.len() < 2 || same.iter().all(|e| !full[e.to])
        }),
        _ => true,
    });
    TreeClass {
        in_g_d,
        in_g_d2,
        in_g_a_f: root_ok && work_ok,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::super::fixtures::*;
    use super::super::{Edge, Subtree};
    use super::*;
    use proptest::prelude::*;

    /// Literal reading of the definition: try every subset of edges inside
    /// the subtree for deletion.
    fn full_by_deletion(tree: &DecisionTree, top: NodeId) -> bool {
        let mut edges: Vec<(NodeId, Edge)> = Vec::new();
        let mut stack = vec![top];
        while let Some(id) = stack.pop() {
            if let Node::Work { edges: es, .. } = tree.node(id) {
                for e in es {
                    edges.push((id, *e));
                    stack.push(e.to);
                }
            }
        }
        assert!(edges.len() <= 16, "oracle limited to small subtrees");
        (0u32..1 << edges.len()).any(|deleted| {
            let kept = |from: NodeId| -> Vec<Edge> {
                edges
                    .iter()
                    .enumerate()
                    .filter(|(i, (f, _))| *f == from && deleted >> i & 1 == 0)
                    .map(|(_, (_, e))| *e)
                    .collect()
            };
            let mut stack = vec![top];
            while let Some(id) = stack.pop() {
                match tree.node(id) {
                    Node::Term { .. } => {}
                    Node::Work { .. } => {
                        let es = kept(id);
                        if es.len() != 2 || es[0].label == es[1].label {
                            return false;
                        }
                        stack.extend(es.iter().map(|e| e.to));
                    }
                    Node::Root { .. } => unreachable!(),
                }
            }
            true
        })
    }

    #[test]
    fn full_subtree_examples() {
        let tree = DecisionTree::from_root_children(vec![
            Subtree::Term(1),
            Subtree::work(0, vec![(0, Subtree::Term(1)), (1, Subtree::Term(2))]),
            Subtree::work(0, vec![(0, Subtree::Term(1)), (0, Subtree::Term(2))]),
        ]);
        let kids = tree.root_children().to_vec();
        assert!(is_full_subtree(&tree, kids[0]));
        assert!(is_full_subtree(&tree, kids[1]));
        assert!(!is_full_subtree(&tree, kids[2]));
        for k in kids {
            assert_eq!(is_full_subtree(&tree, k), full_by_deletion(&tree, k));
        }
    }

    #[test]
    fn class_examples() {
        let c = tree_class(&t1_2_optimal());
        assert!(c.in_g_d2 && c.in_g_d && c.in_g_a_f);
        let c = tree_class(&t1_2_merged_rules());
        assert!(!c.in_g_d && !c.in_g_d2 && c.in_g_a_f);
        let two_terms = DecisionTree::from_root_children(vec![Subtree::Term(1), Subtree::Term(2)]);
        assert!(!tree_class(&two_terms).in_g_a_f);
        let single_edge = DecisionTree::deterministic(Subtree::work(0, vec![(1, Subtree::Term(1))]));
        let c = tree_class(&single_edge);
        assert!(c.in_g_d && !c.in_g_d2);
    }

    fn arb_subtree() -> impl Strategy<Value = Subtree> {
        let leaf = (1u32..3).prop_map(Subtree::Term);
        leaf.prop_recursive(3, 12, 3, |inner| {
            (0usize..2, prop::collection::vec((0u8..2, inner), 1..4)).prop_map(|(a, es)| Subtree::work(a, es))
        })
    }

    pub(crate) fn arb_tree() -> impl Strategy<Value = DecisionTree> {
        prop::collection::vec(arb_subtree(), 1..4).prop_map(DecisionTree::from_root_children)
    }

    proptest! {
        #[test]
        fn full_recursion_matches_deletion_oracle(tree in arb_tree()) {
            for id in 0..tree.nodes().len() {
                if id == tree.root() { continue; }
                let mut count = 0;
                let mut stack = vec![id];
                while let Some(x) = stack.pop() { let c = tree.children(x); count += c.len(); stack.extend(c); }
                if count <= 14 {
                    prop_assert_eq!(is_full_subtree(&tree, id), full_by_deletion(&tree, id));
                }
            }
        }

        #[test]
        fn classes_are_nested_and_counts_obey_node_laws(tree in arb_tree()) {
            let c = tree_class(&tree);
            let m = tree.metrics();
            prop_assert!(!c.in_g_d2 || c.in_g_d);
            prop_assert!(!c.in_g_d || c.in_g_a_f);
            prop_assert_eq!(m.nodes, 1 + m.terminals + m.working);
            if c.in_g_d2 {
                prop_assert_eq!(m.working + 1, m.terminals);
            } else if c.in_g_a_f {
                // Covers G_d \ G_d² as well, since G_d ⊆ G_a^f.
                prop_assert!(m.working + 1 > m.terminals);
            }
        }
    }
}
