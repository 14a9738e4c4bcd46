//! Exact synthesis and complexity analysis of deterministic and
//! nondeterministic decision trees over binary information systems.
//!
//! A problem is given as a [`DecisionTable`]: its rows are the realizable
//! attribute-value tuples and their decisions. Solvers compute the minimum
//! depth and minimum node count of trees solving it deterministically or
//! nondeterministically; [`classify`] tabulates these over growing
//! dimension for an [`AttributeFamily`] and sorts the family into one of
//! three complexity classes.

pub mod analysis;
pub mod classify;
pub mod error;
pub mod family;
pub mod random;
pub mod rowset;
pub mod solvers;
pub mod table;
pub mod tree;

pub use error::{Error, Result};
pub use family::{canonical_worst_selection, generate, AttributeFamily, Labeling};
pub use rowset::RowSet;
pub use table::{make_table, DecisionTable, Row};
pub use tree::{validate, DecisionTree, SolveMode, Subtree};
