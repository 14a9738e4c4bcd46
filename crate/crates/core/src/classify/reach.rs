use serde::{Serialize, Serializer};

use super::profile::worst_table;
use crate::analysis::{count_realizable, reduction_parameter, ReductionScope};
use crate::error::Result;
use crate::family::AttributeFamily;
use crate::solvers::{
    build_reduction_tree, min_depth_det, min_depth_nondet, min_nodes_det, min_nodes_det_budgeted, min_nodes_nondet,
    nondet_min_nodes_within, OracleLimits,
};
use crate::tree::{solves, DecisionTree, SolveMode};

/// Size limits for the nondeterministic search used by reachability checks.
pub const REACH_ORACLE_COLUMNS: usize = 6;
pub const REACH_ORACLE_ROWS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReachKind {
    Ld,
    La,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reachable {
    Yes,
    No,
    Unknown,
}

/// Outcome of an exhaustive search for a tree within both bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchRecord {
    pub method: String,
    pub max_depth: u32,
    pub max_nodes: u32,
    /// Fewest nodes among solving trees within the depth bound, if any.
    pub min_nodes_within_depth: Option<u32>,
    pub found: bool,
}

fn tree_value<S: Serializer>(tree: &DecisionTree, s: S) -> std::result::Result<S::Ok, S::Error> {
    tree.to_value().serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Witness {
        depth: u32,
        nodes: u32,
        #[serde(serialize_with = "tree_value")]
        tree: DecisionTree,
    },
    Analytic {
        rows: usize,
        argument: String,
        search: Option<SearchRecord>,
    },
    Search(SearchRecord),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReachabilityReport {
    pub family: String,
    pub kind: ReachKind,
    pub n: usize,
    pub h_star: u32,
    #[serde(rename = "L_star")]
    pub l_star: u32,
    pub reachable: Reachable,
    pub certificate: Certificate,
}

fn witness(tree: DecisionTree) -> Certificate {
    let m = tree.metrics();
    Certificate::Witness {
        depth: m.depth as u32,
        nodes: m.nodes as u32,
        tree,
    }
}

/// Whether one tree attains both the minimum depth and the minimum node
/// count of the worst table at dimension `n`.
pub fn verify_reachability(family: &AttributeFamily, n: usize, kind: ReachKind) -> Result<ReachabilityReport> {
    let table = worst_table(family, n)?;
    let report = |h_star, l_star, reachable, certificate| ReachabilityReport {
        family: family.kind().id().to_string(),
        kind,
        n,
        h_star,
        l_star,
        reachable,
        certificate,
    };
    let h_ld = min_depth_det(&table)?.value();
    let l_ld = min_nodes_det(&table)?.value();
    let budgeted = min_nodes_det_budgeted(&table, h_ld)?;
    match kind {
        ReachKind::Ld => {
            // The budgeted optimum is exact, so it settles the question.
            let best = budgeted.value();
            if best <= l_ld {
                Ok(report(
                    h_ld,
                    l_ld,
                    Reachable::Yes,
                    witness(budgeted.tree.expect("feasible")),
                ))
            } else {
                let search = SearchRecord {
                    method: "budgeted_dp".into(),
                    max_depth: h_ld,
                    max_nodes: l_ld,
                    min_nodes_within_depth: Some(best),
                    found: false,
                };
                Ok(report(h_ld, l_ld, Reachable::No, Certificate::Search(search)))
            }
        }
        ReachKind::La => {
            let h_star = min_depth_nondet(&table)?.value();
            let l_star = min_nodes_nondet(&table)?.value();
            if h_star == h_ld && budgeted.value() <= l_star {
                return Ok(report(
                    h_star,
                    l_star,
                    Reachable::Yes,
                    witness(budgeted.tree.expect("feasible")),
                ));
            }
            let limits = OracleLimits {
                max_columns: REACH_ORACLE_COLUMNS,
                max_rows: REACH_ORACLE_ROWS,
                max_depth: None,
                max_nodes: None,
            };
            let within = table.n() <= limits.max_columns && table.len() <= limits.max_rows;
            let search = if within {
                let found = nondet_min_nodes_within(&table, h_star, &limits)?;
                Some((found.as_ref().map(|f| f.0), found.filter(|f| f.0 <= l_star)))
            } else {
                None
            };
            let record = |min: Option<u32>, found: bool| SearchRecord {
                method: "nondet_oracle".into(),
                max_depth: h_star,
                max_nodes: l_star,
                min_nodes_within_depth: min,
                found,
            };
            if let Some((_, Some((_, tree)))) = search {
                return Ok(report(h_star, l_star, Reachable::Yes, witness(tree)));
            }
            let rows = count_realizable(&table);
            if table.is_injective() && h_star < usize::BITS && (1usize << h_star) < rows {
                let argument = format!(
                    "a tree with at most 2N = {} nodes needs N = {rows} terminals and N - 1 working nodes, \
                     so every working node has one 0-edge and one 1-edge and the tree is deterministic; \
                     such a tree has depth at least ceil(log2 {rows}) > {h_star}",
                    2 * rows
                );
                let search = search.map(|(min, _)| record(min, false));
                return Ok(report(
                    h_star,
                    l_star,
                    Reachable::No,
                    Certificate::Analytic { rows, argument, search },
                ));
            }
            match search {
                Some((min, _)) => Ok(report(
                    h_star,
                    l_star,
                    Reachable::No,
                    Certificate::Search(record(min, false)),
                )),
                None => Ok(report(h_star, l_star, Reachable::Unknown, Certificate::None)),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryReport {
    pub family: String,
    pub n: usize,
    pub m_hat: usize,
    #[serde(rename = "N")]
    pub realizable: usize,
    #[serde(rename = "L_la")]
    pub l_la: u32,
    pub depth: usize,
    pub nodes: usize,
    pub depth_bound: usize,
    pub node_bound: usize,
    pub solves: bool,
    pub ok: bool,
}

/// Builds the per-row subsystem tree on the worst table and checks it
/// against `h ≤ m̂` and `L ≤ (m̂ + 1)·L_la/2 + 1`.
pub fn verify_boundary_la_pair(family: &AttributeFamily, n: usize) -> Result<BoundaryReport> {
    let table = worst_table(family, n)?;
    let m_hat = reduction_parameter(&table, ReductionScope::FullRows)?;
    let l_la = min_nodes_nondet(&table)?.value();
    let tree = build_reduction_tree(&table)?
        .tree
        .expect("construction always yields a tree");
    let m = tree.metrics();
    let node_bound = (m_hat + 1) * (l_la as usize / 2) + 1;
    let ok_solves = solves(&tree, &table, SolveMode::Nondet);
    Ok(BoundaryReport {
        family: family.kind().id().to_string(),
        n,
        m_hat,
        realizable: count_realizable(&table),
        l_la,
        depth: m.depth,
        nodes: m.nodes,
        depth_bound: m_hat,
        node_bound,
        solves: ok_solves,
        ok: ok_solves && m.depth <= m_hat && m.nodes <= node_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_ld_reachable() {
        let r = verify_reachability(&AttributeFamily::threshold(), 7, ReachKind::Ld).unwrap();
        assert_eq!(r.reachable, Reachable::Yes);
        assert_eq!((r.h_star, r.l_star), (3, 16));
        let Certificate::Witness { depth, nodes, .. } = r.certificate else {
            panic!()
        };
        assert_eq!((depth, nodes), (3, 16));
    }

    #[test]
    fn threshold_la_not_reachable_at_four() {
        let r = verify_reachability(&AttributeFamily::threshold(), 4, ReachKind::La).unwrap();
        assert_eq!(r.reachable, Reachable::No);
        assert_eq!((r.h_star, r.l_star), (2, 10));
        let Certificate::Analytic { rows, search, .. } = r.certificate else {
            panic!()
        };
        assert_eq!(rows, 5);
        let search = search.unwrap();
        assert!(!search.found);
        assert!(search.min_nodes_within_depth.unwrap() > 10);
    }

    #[test]
    fn point_la_reachable() {
        let r = verify_reachability(&AttributeFamily::point(), 3, ReachKind::La).unwrap();
        assert_eq!(r.reachable, Reachable::Yes);
        assert_eq!((r.h_star, r.l_star), (3, 8));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["certificate"]["kind"], "witness");
        assert_eq!(v["reachable"], "yes");
        assert_eq!(v["kind"], "la");
    }

    #[test]
    fn boundary_pairs() {
        let r = verify_boundary_la_pair(&AttributeFamily::threshold(), 5).unwrap();
        assert_eq!((r.m_hat, r.node_bound), (2, 19));
        assert!(r.ok && r.depth <= 2);
        let r = verify_boundary_la_pair(&AttributeFamily::threshold(), 2).unwrap();
        assert_eq!((r.depth, r.nodes, r.depth_bound, r.node_bound), (2, 8, 2, 10));
        let r = verify_boundary_la_pair(&AttributeFamily::Full, 2).unwrap();
        assert_eq!((r.nodes, r.node_bound), (13, 13));
        assert!(r.ok);
    }
}
