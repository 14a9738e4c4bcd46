//! Structural parameters of a decision table: realizable-tuple count,
//! independence dimension, minimum rules and reduction parameters.
//!
//! Everything here is measured on a finite restriction. A reduction
//! parameter computed on a table is only a lower bound for any infinite
//! system the table was cut from.

mod cover;

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rowset::RowSet;
use crate::table::DecisionTable;

pub(crate) use cover::SetCover;

/// Column count above which exact set-cover minima are refused.
pub const DEFAULT_MAX_COLUMNS: usize = 24;
/// Cap on `3ⁿ · rows` for the all-partial-assignments reduction scope.
pub const MAX_PARTIAL_WORK: u64 = 1 << 22;

/// A system of equations `{f_c(x) = v}` and the rows solving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub constraints: Vec<(usize, bool)>,
    pub matched: RowSet,
}

impl Rule {
    pub fn new(table: &DecisionTable, constraints: Vec<(usize, bool)>) -> Result<Rule> {
        if let Some(&(attr, _)) = constraints.iter().find(|(c, _)| *c >= table.n()) {
            return Err(Error::AttributeOutOfRange { attr, n: table.n() });
        }
        let matched = table.matching(&constraints);
        Ok(Rule { constraints, matched })
    }

    /// The full assignment `{f_c(x) = row[c]}` over all columns.
    pub fn full_row(table: &DecisionTable, row: usize) -> Rule {
        let constraints = table.rows()[row].tuple.iter().copied().enumerate().collect();
        Rule::new(table, constraints).expect("columns are in range")
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn columns(&self) -> Vec<usize> {
        self.constraints.iter().map(|&(c, _)| c).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionScope {
    /// Full-row assignments only.
    FullRows,
    /// Every compatible partial assignment.
    AllPartial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    #[serde(rename = "N")]
    pub realizable: usize,
    pub idim: usize,
    pub reduction_full_rows: usize,
    pub reduction_all: Option<usize>,
    pub size_bound_ok: bool,
}

fn check_columns(table: &DecisionTable) -> Result<()> {
    if table.n() > DEFAULT_MAX_COLUMNS {
        return Err(Error::ResourceLimit(format!(
            "{} columns exceed the exact set-cover limit of {DEFAULT_MAX_COLUMNS}",
            table.n()
        )));
    }
    Ok(())
}

/// Number of realizable tuples, which is the number of rows.
pub fn count_realizable(table: &DecisionTable) -> usize {
    table.len()
}

/// Size of the largest column set whose projection of the rows is the full
/// cube `{0,1}^m`. Shattered sets are closed under subsets, so the search
/// grows them one column at a time.
pub fn independence_dimension(table: &DecisionTable) -> usize {
    let shattered = |cols: &[usize]| -> bool {
        if cols.len() >= usize::BITS as usize - 1 || (1usize << cols.len()) > table.len() {
            return false;
        }
        let patterns: HashSet<u64> = table
            .rows()
            .iter()
            .map(|r| {
                cols.iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &c)| acc | (r.tuple[c] as u64) << i)
            })
            .collect();
        patterns.len() == 1 << cols.len()
    };
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    let mut dim = 0;
    loop {
        let mut next = Vec::new();
        for set in &level {
            let start = set.last().map_or(0, |&c| c + 1);
            for c in start..table.n() {
                let mut cand = set.clone();
                cand.push(c);
                if shattered(&cand) {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            return dim;
        }
        dim += 1;
        level = next;
    }
}

/// Shortest sub-assignment of `row`'s tuple whose matched rows all carry the
/// row's decision. Ties go to the lexicographically smallest column set.
pub fn min_consistent_rule(table: &DecisionTable, row: usize) -> Result<Rule> {
    check_columns(table)?;
    let tuple = &table.rows()[row].tuple;
    let decision = table.decision(row);
    let conflicting = RowSet::from_indices(table.len(), (0..table.len()).filter(|&r| table.decision(r) != decision));
    // Column c excludes exactly the rows disagreeing with `row` on c.
    let sets: Vec<RowSet> = (0..table.n())
        .map(|c| table.restrict(&table.all_rows(), c, !tuple[c]))
        .collect();
    let cols = SetCover::new(&sets)
        .minimum(&conflicting)?
        .expect("distinct tuples are separated by some column");
    Rule::new(table, cols.into_iter().map(|c| (c, tuple[c])).collect())
}

/// Smallest subset of `system`'s equations with exactly the same solution
/// rows. Ties go to the lexicographically smallest column set.
pub fn min_same_solution_subsystem(table: &DecisionTable, system: &Rule) -> Result<Rule> {
    check_columns(table)?;
    let mut constraints = system.constraints.clone();
    constraints.sort_unstable();
    constraints.dedup();
    let full = Rule::new(table, constraints)?;
    if full.matched.is_empty() {
        return Err(Error::IncompatibleSystem);
    }
    let excluded = table.all_rows().difference(&full.matched);
    let sets: Vec<RowSet> = full
        .constraints
        .iter()
        .map(|&(c, v)| table.restrict(&table.all_rows(), c, !v))
        .collect();
    let picked = SetCover::new(&sets)
        .minimum(&excluded)?
        .expect("the full system excludes every unmatched row");
    let kept = picked.into_iter().map(|i| full.constraints[i]).collect();
    Rule::new(table, kept)
}

/// Largest minimum same-solution subsystem over the chosen assignments.
pub fn reduction_parameter(table: &DecisionTable, scope: ReductionScope) -> Result<usize> {
    check_columns(table)?;
    match scope {
        ReductionScope::FullRows => {
            let sizes = (0..table.len())
                .into_par_iter()
                .map(|r| min_same_solution_subsystem(table, &Rule::full_row(table, r)).map(|s| s.len()))
                .collect::<Result<Vec<_>>>()?;
            Ok(sizes.into_iter().max().unwrap_or(0))
        }
        ReductionScope::AllPartial => {
            let work = 3u64
                .checked_pow(table.n() as u32)
                .and_then(|p| p.checked_mul(table.len() as u64))
                .unwrap_or(u64::MAX);
            if work > MAX_PARTIAL_WORK {
                return Err(Error::ResourceLimit(format!(
                    "3^{} x {} rows exceeds the partial-assignment cap {MAX_PARTIAL_WORK}",
                    table.n(),
                    table.len()
                )));
            }
            let count = 3usize.pow(table.n() as u32);
            let sizes = (0..count)
                .into_par_iter()
                .map(|code| {
                    let mut constraints = Vec::new();
                    let mut x = code;
                    for c in 0..table.n() {
                        match x % 3 {
                            1 => constraints.push((c, false)),
                            2 => constraints.push((c, true)),
                            _ => {}
                        }
                        x /= 3;
                    }
                    let rule = Rule::new(table, constraints)?;
                    if rule.matched.is_empty() {
                        return Ok(0);
                    }
                    min_same_solution_subsystem(table, &rule).map(|s| s.len())
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(sizes.into_iter().max().unwrap_or(0))
        }
    }
}

/// `N ≤ (4n)^idim` when the full cube is not realized; trivially true when it is.
pub fn check_size_bound(table: &DecisionTable) -> bool {
    let n = table.n();
    let realizable = count_realizable(table) as u128;
    if n < 128 && realizable == 1u128 << n {
        return true;
    }
    let idim = independence_dimension(table) as u32;
    let bound = (4 * n as u128).checked_pow(idim).unwrap_or(u128::MAX);
    realizable <= bound
}

/// `n + 1 ≤ N`. Only meaningful for worst-case selections.
pub fn check_size_lower_bound(table: &DecisionTable) -> bool {
    count_realizable(table) > table.n()
}

pub fn analyze(table: &DecisionTable, scope: ReductionScope) -> Result<AnalysisReport> {
    let reduction_full_rows = reduction_parameter(table, ReductionScope::FullRows)?;
    let reduction_all = match scope {
        ReductionScope::FullRows => None,
        ReductionScope::AllPartial => Some(reduction_parameter(table, ReductionScope::AllPartial)?),
    };
    Ok(AnalysisReport {
        realizable: count_realizable(table),
        idim: independence_dimension(table),
        reduction_full_rows,
        reduction_all,
        size_bound_ok: check_size_bound(table),
    })
}
