//! Exhaustive searches over small tables, written independently of the
//! dynamic programs so the two can be compared.
//!
//! Rows are bits of a `u32`. The deterministic search tries every column at
//! every node, constant ones included, with edge-label sets `{0,1}`, `{0}`
//! or `{1}`. The nondeterministic search also lets any node (the root
//! included) send several edges with the same label, each to its own
//! subtree covering part of the rows; it minimizes over every way to split
//! the rows to be covered among those subtrees.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::DecisionTable;
use crate::tree::{DecisionTree, Subtree};

const STATE_CAP: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_columns: usize,
    pub max_rows: usize,
    /// Largest depth searched; defaults to the column count, which is enough
    /// because repeating a column on a path never helps.
    pub max_depth: Option<u32>,
    /// Node counts above this are reported as not found.
    pub max_nodes: Option<u32>,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_columns: 3,
            max_rows: 8,
            max_depth: None,
            max_nodes: None,
        }
    }
}

impl OracleLimits {
    pub fn unbounded_size() -> Self {
        OracleLimits {
            max_columns: 16,
            max_rows: 32,
            ..Self::default()
        }
    }
}

/// Minima found within the limits; `None` when no tree fits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleMinima {
    pub depth: Option<u32>,
    pub nodes: Option<u32>,
    #[serde(skip)]
    pub depth_tree: Option<DecisionTree>,
    #[serde(skip)]
    pub nodes_tree: Option<DecisionTree>,
}

impl OracleMinima {
    /// `(depth, nodes)`, panicking when either was not found.
    pub fn pair(&self) -> (u32, u32) {
        (self.depth.expect("depth found"), self.nodes.expect("nodes found"))
    }
}

struct Masks {
    ones: Vec<u32>,
    decisions: Vec<u32>,
    all: u32,
}

impl Masks {
    fn new(table: &DecisionTable, limits: &OracleLimits) -> Result<Self> {
        if table.n() > limits.max_columns || table.len() > limits.max_rows || table.len() > 32 {
            return Err(Error::ResourceLimit(format!(
                "oracle limited to {} columns and {} rows, table has {} and {}",
                limits.max_columns,
                limits.max_rows,
                table.n(),
                table.len()
            )));
        }
        let ones = (0..table.n())
            .map(|c| {
                (0..table.len())
                    .filter(|&r| table.value(r, c))
                    .fold(0u32, |m, r| m | 1 << r)
            })
            .collect();
        let decisions = table.rows().iter().map(|r| r.decision).collect();
        let all = if table.len() == 32 {
            u32::MAX
        } else {
            (1u32 << table.len()) - 1
        };
        Ok(Masks { ones, decisions, all })
    }

    /// Common decision of the rows in `set`; 1 for the empty set.
    fn decision(&self, set: u32) -> Option<u32> {
        let mut it = (0..32).filter(|r| set >> r & 1 == 1).map(|r| self.decisions[r]);
        let first = it.next().unwrap_or(1);
        it.all(|d| d == first).then_some(first)
    }

    fn split(&self, set: u32, c: usize) -> (u32, u32) {
        (set & !self.ones[c], set & self.ones[c])
    }
}

fn add(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    Some(a? + b?)
}

fn better(best: Option<u32>, cand: Option<u32>) -> Option<u32> {
    match (best, cand) {
        (Some(b), Some(c)) => Some(b.min(c)),
        (b, c) => b.or(c),
    }
}

fn check(states: usize) -> Result<()> {
    if states >= STATE_CAP {
        return Err(Error::ResourceLimit(format!("oracle exceeded {STATE_CAP} states")));
    }
    Ok(())
}

struct DetSearch {
    m: Masks,
    memo: HashMap<(u32, u32), Option<u32>>,
}

impl DetSearch {
    /// Fewest nodes in a subtree that sends every row of `set` to a terminal
    /// with its decision, using at most `b` working levels.
    fn sub(&mut self, set: u32, b: u32) -> Result<Option<u32>> {
        if self.m.decision(set).is_some() {
            return Ok(Some(1));
        }
        if b == 0 {
            return Ok(None);
        }
        if let Some(&v) = self.memo.get(&(set, b)) {
            return Ok(v);
        }
        check(self.memo.len())?;
        let mut best = None;
        for c in 0..self.m.ones.len() {
            for (_, _, cost) in self.options(set, c, b)? {
                best = better(best, cost);
            }
        }
        self.memo.insert((set, b), best);
        Ok(best)
    }

    /// Costs of the admissible edge-label sets for column `c`.
    #[allow(clippy::type_complexity)]
    fn options(&mut self, set: u32, c: usize, b: u32) -> Result<Vec<(Option<u32>, Option<u32>, Option<u32>)>> {
        let (zero, one) = self.m.split(set, c);
        let mut out = Vec::new();
        let z = self.sub(zero, b - 1)?;
        let o = self.sub(one, b - 1)?;
        out.push((Some(zero), Some(one), add(Some(1), add(z, o))));
        if one == 0 {
            out.push((Some(zero), None, add(Some(1), z)));
        }
        if zero == 0 {
            out.push((None, Some(one), add(Some(1), o)));
        }
        Ok(out)
    }

    fn build(&mut self, set: u32, b: u32) -> Result<Subtree> {
        if let Some(d) = self.m.decision(set) {
            return Ok(Subtree::Term(d));
        }
        let target = self.sub(set, b)?;
        for c in 0..self.m.ones.len() {
            for (s0, s1, cost) in self.options(set, c, b)? {
                if cost == target {
                    let mut edges = Vec::new();
                    if let Some(s) = s0 {
                        edges.push((0, self.build(s, b - 1)?));
                    }
                    if let Some(s) = s1 {
                        edges.push((1, self.build(s, b - 1)?));
                    }
                    return Ok(Subtree::work(c, edges));
                }
            }
        }
        unreachable!("the minimum is attained by some option")
    }
}

/// Minimum depth and node count over all deterministic trees within limits.
pub fn exhaustive_det_oracle(table: &DecisionTable, limits: &OracleLimits) -> Result<OracleMinima> {
    let m = Masks::new(table, limits)?;
    let all = m.all;
    let cap = limits.max_depth.unwrap_or(table.n() as u32);
    let mut s = DetSearch {
        m,
        memo: HashMap::new(),
    };
    let mut depth = None;
    for b in 0..=cap {
        if s.sub(all, b)?.is_some() {
            depth = Some(b);
            break;
        }
    }
    let depth_tree = match depth {
        Some(b) => Some(DecisionTree::deterministic(s.build(all, b)?)),
        None => None,
    };
    let nodes = s
        .sub(all, cap)?
        .map(|c| c + 1)
        .filter(|&l| limits.max_nodes.is_none_or(|x| l <= x));
    let nodes_tree = match nodes {
        Some(_) => Some(DecisionTree::deterministic(s.build(all, cap)?)),
        None => None,
    };
    Ok(OracleMinima {
        depth,
        nodes,
        depth_tree,
        nodes_tree,
    })
}

struct NondetSearch {
    m: Masks,
    /// Single subtree: (reaching rows, rows it must cover, depth budget).
    one: HashMap<(u32, u32, u32), Option<u32>>,
    /// Any number of sibling subtrees entered by same-label edges.
    many: HashMap<(u32, u32, u32), Option<u32>>,
}

impl NondetSearch {
    fn sub(&mut self, reach: u32, cover: u32, b: u32) -> Result<Option<u32>> {
        if self.m.decision(reach).is_some() {
            return Ok(Some(1));
        }
        if b == 0 {
            return Ok(None);
        }
        if let Some(&v) = self.one.get(&(reach, cover, b)) {
            return Ok(v);
        }
        check(self.one.len() + self.many.len())?;
        let mut best = None;
        for c in 0..self.m.ones.len() {
            best = better(best, self.work_cost(reach, cover, c, b)?);
        }
        self.one.insert((reach, cover, b), best);
        Ok(best)
    }

    fn work_cost(&mut self, reach: u32, cover: u32, c: usize, b: u32) -> Result<Option<u32>> {
        let (r0, r1) = self.m.split(reach, c);
        let (c0, c1) = self.m.split(cover, c);
        Ok(add(
            Some(1),
            add(self.forest(r0, c0, b - 1)?, self.forest(r1, c1, b - 1)?),
        ))
    }

    /// Fewest nodes in a set of subtrees, all reached by `reach`, that
    /// together cover `cover`.
    fn forest(&mut self, reach: u32, cover: u32, b: u32) -> Result<Option<u32>> {
        if cover == 0 {
            return Ok(Some(0));
        }
        if let Some(&v) = self.many.get(&(reach, cover, b)) {
            return Ok(v);
        }
        check(self.one.len() + self.many.len())?;
        let mut best = None;
        for (part, rest) in parts(cover) {
            let cost = add(self.sub(reach, part, b)?, self.forest(reach, rest, b)?);
            best = better(best, cost);
        }
        self.many.insert((reach, cover, b), best);
        Ok(best)
    }

    fn build_sub(&mut self, reach: u32, cover: u32, b: u32) -> Result<Subtree> {
        if let Some(d) = self.m.decision(reach) {
            return Ok(Subtree::Term(d));
        }
        let target = self.sub(reach, cover, b)?;
        for c in 0..self.m.ones.len() {
            if self.work_cost(reach, cover, c, b)? == target {
                let (r0, r1) = self.m.split(reach, c);
                let (c0, c1) = self.m.split(cover, c);
                let mut edges: Vec<(u8, Subtree)> = Vec::new();
                edges.extend(self.build_forest(r0, c0, b - 1)?.into_iter().map(|s| (0, s)));
                edges.extend(self.build_forest(r1, c1, b - 1)?.into_iter().map(|s| (1, s)));
                return Ok(Subtree::work(c, edges));
            }
        }
        unreachable!("the minimum is attained by some column")
    }

    fn build_forest(&mut self, reach: u32, cover: u32, b: u32) -> Result<Vec<Subtree>> {
        if cover == 0 {
            return Ok(Vec::new());
        }
        let target = self.forest(reach, cover, b)?;
        for (part, rest) in parts(cover) {
            if add(self.sub(reach, part, b)?, self.forest(reach, rest, b)?) == target {
                let mut out = vec![self.build_sub(reach, part, b)?];
                out.extend(self.build_forest(reach, rest, b)?);
                return Ok(out);
            }
        }
        unreachable!("the minimum is attained by some split")
    }
}

/// Splits of `cover` into a part holding its lowest row and the rest.
fn parts(cover: u32) -> Vec<(u32, u32)> {
    let low = cover & cover.wrapping_neg();
    let others = cover & !low;
    let mut out = Vec::new();
    let mut sub = others;
    loop {
        out.push((low | sub, others & !sub));
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & others;
    }
    out.reverse();
    out
}

fn nondet_search(table: &DecisionTable, limits: &OracleLimits) -> Result<NondetSearch> {
    Ok(NondetSearch {
        m: Masks::new(table, limits)?,
        one: HashMap::new(),
        many: HashMap::new(),
    })
}

/// Minimum depth and node count over all nondeterministic trees within limits.
pub fn exhaustive_nondet_oracle(table: &DecisionTable, limits: &OracleLimits) -> Result<OracleMinima> {
    let mut s = nondet_search(table, limits)?;
    let all = s.m.all;
    let cap = limits.max_depth.unwrap_or(table.n() as u32);
    let mut depth = None;
    for b in 0..=cap {
        if s.forest(all, all, b)?.is_some() {
            depth = Some(b);
            break;
        }
    }
    let depth_tree = match depth {
        Some(b) => Some(DecisionTree::from_root_children(s.build_forest(all, all, b)?)),
        None => None,
    };
    let nodes = s
        .forest(all, all, cap)?
        .map(|c| c + 1)
        .filter(|&l| limits.max_nodes.is_none_or(|x| l <= x));
    let nodes_tree = match nodes {
        Some(_) => Some(DecisionTree::from_root_children(s.build_forest(all, all, cap)?)),
        None => None,
    };
    Ok(OracleMinima {
        depth,
        nodes,
        depth_tree,
        nodes_tree,
    })
}

/// Fewest nodes of a nondeterministic tree of depth at most `depth`, with
/// a witness; `None` if no such tree has at most `limits.max_nodes` nodes.
pub fn nondet_min_nodes_within(
    table: &DecisionTable,
    depth: u32,
    limits: &OracleLimits,
) -> Result<Option<(u32, DecisionTree)>> {
    let mut s = nondet_search(table, limits)?;
    let all = s.m.all;
    let Some(cost) = s.forest(all, all, depth)? else {
        return Ok(None);
    };
    if limits.max_nodes.is_some_and(|x| cost + 1 > x) {
        return Ok(None);
    }
    let tree = DecisionTree::from_root_children(s.build_forest(all, all, depth)?);
    Ok(Some((cost + 1, tree)))
}
