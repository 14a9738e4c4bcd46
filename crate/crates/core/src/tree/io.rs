//! `dtree-v1` JSON and Graphviz DOT output.
//!
//! Serialization always writes the canonical form: ids in preorder, sibling
//! edges sorted by label and then by the canonical key of the child.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{DecisionTree, Edge, Node, NodeId, Subtree};
use crate::error::{Error, Result};

pub const TREE_FORMAT: &str = "dtree-v1";

#[derive(Serialize, Deserialize)]
struct TreeFile {
    format: String,
    root: NodeId,
    nodes: Vec<NodeRecord>,
}

#[derive(Serialize, Deserialize)]
struct NodeRecord {
    id: NodeId,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attr: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<EdgeRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    decision: Option<i64>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<u8>,
    to: NodeId,
}

fn canonical_key(s: &Subtree) -> String {
    match s {
        Subtree::Term(d) => format!("d{d}"),
        Subtree::Work { attr, edges } => {
            let mut parts: Vec<(u8, String)> = edges.iter().map(|(l, c)| (*l, canonical_key(c))).collect();
            parts.sort();
            let inner: Vec<String> = parts.into_iter().map(|(l, k)| format!("{l}:{k}")).collect();
            format!("f{attr}({})", inner.join(","))
        }
    }
}

fn canonical_subtree(s: Subtree) -> Subtree {
    match s {
        Subtree::Term(d) => Subtree::Term(d),
        Subtree::Work { attr, edges } => {
            let mut edges: Vec<(u8, String, Subtree)> = edges
                .into_iter()
                .map(|(l, c)| {
                    let c = canonical_subtree(c);
                    (l, canonical_key(&c), c)
                })
                .collect();
            edges.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            Subtree::Work {
                attr,
                edges: edges.into_iter().map(|(l, _, c)| (l, c)).collect(),
            }
        }
    }
}

impl DecisionTree {
    /// Isomorphic copy with ids in preorder and sorted sibling edges.
    pub fn canonical(&self) -> DecisionTree {
        let mut kids: Vec<(String, Subtree)> = self
            .root_subtrees()
            .into_iter()
            .map(|s| {
                let s = canonical_subtree(s);
                (canonical_key(&s), s)
            })
            .collect();
        kids.sort();
        DecisionTree::from_root_children(kids.into_iter().map(|(_, s)| s).collect())
    }

    /// Equality up to renumbering and reordering of sibling edges.
    pub fn structurally_eq(&self, other: &DecisionTree) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("tree serialization cannot fail")
    }

    pub fn to_value(&self) -> serde_json::Value {
        let c = self.canonical();
        let nodes = c
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, n)| match n {
                Node::Root { edges } => NodeRecord {
                    id,
                    kind: "root".into(),
                    attr: None,
                    edges: Some(edges.iter().map(|&to| EdgeRecord { label: None, to }).collect()),
                    decision: None,
                },
                Node::Work { attr, edges } => NodeRecord {
                    id,
                    kind: "work".into(),
                    attr: Some(*attr),
                    edges: Some(
                        edges
                            .iter()
                            .map(|e| EdgeRecord {
                                label: Some(e.label),
                                to: e.to,
                            })
                            .collect(),
                    ),
                    decision: None,
                },
                Node::Term { decision } => NodeRecord {
                    id,
                    kind: "term".into(),
                    attr: None,
                    edges: None,
                    decision: Some(*decision as i64),
                },
            })
            .collect();
        serde_json::to_value(TreeFile {
            format: TREE_FORMAT.into(),
            root: c.root(),
            nodes,
        })
        .expect("tree serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_value(serde_json::from_str(text)?)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        let file: TreeFile = serde_json::from_value(value)?;
        if file.format != TREE_FORMAT {
            return Err(Error::Parse(format!("unknown tree format {:?}", file.format)));
        }
        let count = file.nodes.len();
        let mut slots: Vec<Option<Node>> = vec![None; count];
        for rec in file.nodes {
            if rec.id >= count {
                return Err(Error::Parse(format!("node id {} out of range", rec.id)));
            }
            if slots[rec.id].is_some() {
                return Err(Error::Parse(format!("duplicate node id {}", rec.id)));
            }
            let edges = rec.edges.unwrap_or_default();
            let node = match rec.kind.as_str() {
                "root" => {
                    if edges.iter().any(|e| e.label.is_some()) {
                        return Err(Error::Parse("root edges carry no label".into()));
                    }
                    Node::Root {
                        edges: edges.iter().map(|e| e.to).collect(),
                    }
                }
                "work" => Node::Work {
                    attr: rec
                        .attr
                        .ok_or_else(|| Error::Parse(format!("working node {} has no attribute", rec.id)))?,
                    edges: edges
                        .iter()
                        .map(|e| {
                            let label = e
                                .label
                                .ok_or_else(|| Error::Parse(format!("unlabeled edge at node {}", rec.id)))?;
                            Ok(Edge { label, to: e.to })
                        })
                        .collect::<Result<_>>()?,
                },
                "term" => {
                    let d = rec
                        .decision
                        .ok_or_else(|| Error::Parse(format!("terminal {} has no decision", rec.id)))?;
                    if d < 1 || d > u32::MAX as i64 {
                        return Err(Error::BadDecision(d));
                    }
                    Node::Term { decision: d as u32 }
                }
                other => return Err(Error::Parse(format!("unknown node kind {other:?}"))),
            };
            slots[rec.id] = Some(node);
        }
        let nodes = slots.into_iter().map(|n| n.expect("ids are a permutation")).collect();
        DecisionTree::from_nodes(nodes, file.root)
    }

    /// Graphviz rendering of the canonical form.
    pub fn to_dot(&self) -> String {
        let c = self.canonical();
        let mut out = String::from("digraph tree {\n");
        for (id, n) in c.nodes().iter().enumerate() {
            let _ = match n {
                Node::Root { .. } => writeln!(out, "  n{id} [shape=point];"),
                Node::Work { attr, .. } => writeln!(out, "  n{id} [label=\"f{attr}\"];"),
                Node::Term { decision } => writeln!(out, "  n{id} [label=\"d={decision}\", shape=box];"),
            };
        }
        for (id, n) in c.nodes().iter().enumerate() {
            match n {
                Node::Root { edges } => {
                    for to in edges {
                        let _ = writeln!(out, "  n{id} -> n{to};");
                    }
                }
                Node::Work { edges, .. } => {
                    for e in edges {
                        let _ = writeln!(out, "  n{id} -> n{} [label=\"{}\"];", e.to, e.label);
                    }
                }
                Node::Term { .. } => {}
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn json_layout() {
        let text =
            DecisionTree::deterministic(Subtree::work(0, vec![(1, Subtree::Term(2)), (0, Subtree::Term(1))])).to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["format"], "dtree-v1");
        assert_eq!(v["nodes"][0]["kind"], "root");
        assert_eq!(v["nodes"][1]["attr"], 0);
        assert_eq!(v["nodes"][1]["edges"][0]["label"], 0);
        assert_eq!(v["nodes"][2]["decision"], 1);
        assert!(text.find("\"id\"").unwrap() < text.find("\"kind\"").unwrap());
    }

    #[test]
    fn rejects_bad_json() {
        let bad_label = r#"{"format":"dtree-v1","root":0,"nodes":[{"id":0,"kind":"root","edges":[{"label":0,"to":1}]},{"id":1,"kind":"term","decision":1}]}"#;
        assert!(DecisionTree::from_json(bad_label).is_err());
        let dup = r#"{"format":"dtree-v1","root":0,"nodes":[{"id":0,"kind":"root","edges":[{"to":1}]},{"id":0,"kind":"term","decision":1}]}"#;
        assert!(DecisionTree::from_json(dup).is_err());
        let zero = r#"{"format":"dtree-v1","root":0,"nodes":[{"id":0,"kind":"root","edges":[{"to":1}]},{"id":1,"kind":"term","decision":0}]}"#;
        assert!(matches!(DecisionTree::from_json(zero), Err(Error::BadDecision(0))));
    }

    #[test]
    fn dot_output() {
        let dot = t1_2_merged_rules().to_dot();
        assert_eq!(dot.matches("[shape=point]").count(), 1);
        assert_eq!(dot.lines().filter(|l| l.contains(" [") && !l.contains("->")).count(), 8);
        assert!(dot.contains("label=\"f0\""));
        assert!(dot.contains("label=\"d=3\""));
        assert!(dot.lines().any(|l| l.starts_with("  n0 -> ") && !l.contains("label")));
    }

    proptest! {
        #[test]
        fn serialization_round_trips(tree in super::super::class::tests::arb_tree()) {
            let text = tree.to_json();
            let back = DecisionTree::from_json(&text).unwrap();
            prop_assert!(back.structurally_eq(&tree));
            prop_assert_eq!(&back, &tree.canonical());
            prop_assert_eq!(back.to_json(), text);
        }
    }
}
