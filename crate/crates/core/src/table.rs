//! Decision tables: the finite restriction of a problem `z = (ν, f₁, …, fₙ)`.
//!
//! Each row is one realizable attribute-value tuple together with the
//! decision attached to it. Columns are the attributes of the problem and
//! may repeat.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rowset::RowSet;

pub const TABLE_FORMAT: &str = "dtable-v1";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    pub tuple: Vec<bool>,
    pub decision: u32,
}

impl Row {
    pub fn new(tuple: Vec<bool>, decision: u32) -> Self {
        Row { tuple, decision }
    }

    pub fn tuple_string(&self) -> String {
        tuple_string(&self.tuple)
    }
}

pub fn tuple_string(tuple: &[bool]) -> String {
    tuple.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_tuple(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("bad tuple character {other:?} in {s:?}"))),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTable {
    n: usize,
    rows: Vec<Row>,
    name: Option<String>,
    /// `ones[c]` holds the rows whose value in column `c` is 1.
    ones: Vec<RowSet>,
}

impl DecisionTable {
    /// Builds a table, keeping the rows in the order given.
    pub fn new(n: usize, rows: Vec<Row>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoAttributes);
        }
        if rows.is_empty() {
            return Err(Error::EmptyTable);
        }
        let mut seen = HashSet::with_capacity(rows.len());
        for row in &rows {
            if row.tuple.len() != n {
                return Err(Error::BadDimension {
                    expected: n,
                    found: row.tuple.len(),
                });
            }
            if row.decision == 0 {
                return Err(Error::BadDecision(0));
            }
            if !seen.insert(&row.tuple) {
                return Err(Error::DuplicateTuple(row.tuple_string()));
            }
        }
        let ones = (0..n)
            .map(|c| {
                RowSet::from_indices(
                    rows.len(),
                    rows.iter().enumerate().filter(|(_, r)| r.tuple[c]).map(|(i, _)| i),
                )
            })
            .collect();
        Ok(DecisionTable {
            n,
            rows,
            name: None,
            ones,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Number of attribute columns.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn value(&self, row: usize, col: usize) -> bool {
        self.rows[row].tuple[col]
    }

    pub fn decision(&self, row: usize) -> u32 {
        self.rows[row].decision
    }

    pub fn all_rows(&self) -> RowSet {
        RowSet::full(self.rows.len())
    }

    pub fn no_rows(&self) -> RowSet {
        RowSet::empty(self.rows.len())
    }

    /// Rows whose value in `col` is 1.
    pub fn ones(&self, col: usize) -> &RowSet {
        &self.ones[col]
    }

    /// Rows of `set` whose value in `col` equals `value`.
    pub fn restrict(&self, set: &RowSet, col: usize, value: bool) -> RowSet {
        if value {
            set.intersection(&self.ones[col])
        } else {
            set.difference(&self.ones[col])
        }
    }

    /// Splits `set` on `col` into its 0-part and 1-part.
    pub fn split(&self, set: &RowSet, col: usize) -> (RowSet, RowSet) {
        (self.restrict(set, col, false), self.restrict(set, col, true))
    }

    /// Rows satisfying every `(column, value)` constraint.
    pub fn matching(&self, constraints: &[(usize, bool)]) -> RowSet {
        constraints
            .iter()
            .fold(self.all_rows(), |acc, &(c, v)| self.restrict(&acc, c, v))
    }

    /// The common decision of a nonempty row set, if there is one.
    pub fn common_decision(&self, set: &RowSet) -> Option<u32> {
        let mut it = set.iter();
        let first = self.rows[it.next()?].decision;
        it.all(|r| self.rows[r].decision == first).then_some(first)
    }

    pub fn is_homogeneous(&self, set: &RowSet) -> bool {
        set.is_empty() || self.common_decision(set).is_some()
    }

    pub fn distinct_decisions(&self) -> BTreeSet<u32> {
        self.rows.iter().map(|r| r.decision).collect()
    }

    /// True when distinct rows carry distinct decisions.
    pub fn is_injective(&self) -> bool {
        self.distinct_decisions().len() == self.rows.len()
    }

    /// Index of the row carrying `tuple`.
    pub fn find(&self, tuple: &[bool]) -> Option<usize> {
        self.rows.iter().position(|r| r.tuple == tuple)
    }

    /// Copy of the table with its rows in lexicographic tuple order.
    pub fn sorted(&self) -> DecisionTable {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| a.tuple.cmp(&b.tuple));
        let mut t = DecisionTable::new(self.n, rows).expect("rows were already valid");
        t.name = self.name.clone();
        t
    }

    pub fn to_json(&self) -> String {
        let sorted = self.sorted();
        let file = TableFile {
            format: TABLE_FORMAT.to_string(),
            n: self.n,
            name: self.name.clone(),
            rows: sorted
                .rows
                .iter()
                .map(|r| RowRecord {
                    t: r.tuple_string(),
                    d: r.decision as i64,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("table serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)?;
        if file.format != TABLE_FORMAT {
            return Err(Error::Parse(format!("unknown table format {:?}", file.format)));
        }
        let rows = file
            .rows
            .into_iter()
            .map(|r| {
                if r.d < 1 || r.d > u32::MAX as i64 {
                    return Err(Error::BadDecision(r.d));
                }
                Ok(Row::new(parse_tuple(&r.t)?, r.d as u32))
            })
            .collect::<Result<Vec<_>>>()?;
        let t = DecisionTable::new(file.n, rows)?;
        Ok(match file.name {
            Some(name) => t.with_name(name),
            None => t,
        })
    }
}

/// Builds a table from `(tuple, decision)` pairs, keeping the given order.
pub fn make_table(n: usize, rows: impl IntoIterator<Item = (Vec<bool>, u32)>) -> Result<DecisionTable> {
    DecisionTable::new(n, rows.into_iter().map(|(t, d)| Row::new(t, d)).collect())
}

/// Convenience form of [`make_table`] taking tuples as `"0110"` strings.
pub fn table_from_strs(rows: &[(&str, u32)]) -> Result<DecisionTable> {
    let n = rows.first().map_or(0, |(t, _)| t.len());
    let rows = rows
        .iter()
        .map(|&(t, d)| Ok((parse_tuple(t)?, d)))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    make_table(n, rows)
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    format: String,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    rows: Vec<RowRecord>,
}

#[derive(Serialize, Deserialize)]
struct RowRecord {
    t: String,
    d: i64,
}
