//! Seeded random tables for tests and benchmarks.

use rand::Rng;

use crate::rowset::RowSet;
use crate::table::{make_table, DecisionTable};
use crate::tree::{DecisionTree, Subtree};

/// Random table over `n` columns with a nonempty random subset of `{0,1}^n`
/// as rows. With `decisions = None` every row gets its own decision;
/// otherwise decisions are drawn uniformly from `1..=k`.
pub fn random_table<R: Rng + ?Sized>(rng: &mut R, n: usize, decisions: Option<u32>) -> DecisionTable {
    assert!((1..=16).contains(&n), "random tables support 1..=16 columns");
    let mut tuples: Vec<Vec<bool>> = (0u32..1 << n)
        .filter(|_| rng.gen_bool(0.5))
        .map(|code| (0..n).map(|c| code >> (n - 1 - c) & 1 == 1).collect())
        .collect();
    if tuples.is_empty() {
        let code = rng.gen_range(0u32..1 << n);
        tuples.push((0..n).map(|c| code >> (n - 1 - c) & 1 == 1).collect());
    }
    let rows = tuples.into_iter().enumerate().map(|(i, t)| {
        let d = match decisions {
            None => i as u32 + 1,
            Some(k) => rng.gen_range(1..=k.max(1)),
        };
        (t, d)
    });
    make_table(n, rows).expect("distinct tuples of equal width")
}

/// Random table with exactly `rows` distinct tuples (capped at `2ⁿ`).
pub fn random_table_with_rows<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    rows: usize,
    decisions: Option<u32>,
) -> DecisionTable {
    assert!((1..=20).contains(&n), "random tables support 1..=20 columns");
    let total = 1usize << n;
    let picked = rand::seq::index::sample(rng, total, rows.clamp(1, total)).into_vec();
    let mut codes = picked;
    codes.sort_unstable();
    let rows: Vec<(Vec<bool>, u32)> = codes
        .into_iter()
        .enumerate()
        .map(|(i, code)| {
            let t = (0..n).map(|c| code >> (n - 1 - c) & 1 == 1).collect();
            let d = match decisions {
                None => i as u32 + 1,
                Some(k) => rng.gen_range(1..=k.max(1)),
            };
            (t, d)
        })
        .collect();
    make_table(n, rows).expect("distinct tuples of equal width")
}

/// Random deterministic tree solving `table`. Splits may use constant
/// columns, working nodes may drop an edge that no row takes, and edges no
/// row takes lead to arbitrary subtrees, so the result is usually far from
/// normal form.
pub fn random_det_tree<R: Rng + ?Sized>(rng: &mut R, table: &DecisionTable) -> DecisionTree {
    DecisionTree::deterministic(grow(rng, table, &table.all_rows(), 0))
}

fn grow<R: Rng + ?Sized>(rng: &mut R, table: &DecisionTable, rows: &RowSet, depth: usize) -> Subtree {
    let max_decision = table.distinct_decisions().last().copied().unwrap_or(1);
    if rows.is_empty() {
        if depth < table.n() + 2 && rng.gen_bool(0.3) {
            let attr = rng.gen_range(0..table.n());
            let mut edges = Vec::new();
            for label in 0..2u8 {
                if rng.gen_bool(0.7) {
                    edges.push((label, grow(rng, table, rows, depth + 1)));
                }
            }
            if !edges.is_empty() {
                return Subtree::work(attr, edges);
            }
        }
        return Subtree::Term(rng.gen_range(1..=max_decision));
    }
    if let Some(d) = table.common_decision(rows) {
        if depth >= table.n() + 2 || rng.gen_bool(0.7) {
            return Subtree::Term(d);
        }
    }
    let splitting: Vec<usize> = (0..table.n())
        .filter(|&c| {
            let (z, o) = table.split(rows, c);
            !z.is_empty() && !o.is_empty()
        })
        .collect();
    let attr = if depth >= table.n() + 2 && !splitting.is_empty() {
        splitting[rng.gen_range(0..splitting.len())]
    } else {
        rng.gen_range(0..table.n())
    };
    let (zero, one) = table.split(rows, attr);
    let mut edges = Vec::new();
    for (label, part) in [(0u8, zero), (1u8, one)] {
        if !part.is_empty() || rng.gen_bool(0.5) {
            edges.push((label, grow(rng, table, &part, depth + 1)));
        }
    }
    Subtree::work(attr, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_tables_are_reproducible() {
        let a = random_table(&mut ChaCha8Rng::seed_from_u64(7), 4, Some(3));
        let b = random_table(&mut ChaCha8Rng::seed_from_u64(7), 4, Some(3));
        assert_eq!(a.to_json(), b.to_json());
        assert!(!a.is_empty());
        let inj = random_table(&mut ChaCha8Rng::seed_from_u64(1), 3, None);
        assert!(inj.is_injective());
        let sized = random_table_with_rows(&mut ChaCha8Rng::seed_from_u64(2), 5, 9, Some(2));
        assert_eq!(sized.len(), 9);
        assert!(sized.distinct_decisions().iter().all(|&d| (1..=2).contains(&d)));
    }

    #[test]
    fn random_trees_solve_their_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let table = random_table(&mut rng, n, Some(3));
            let tree = random_det_tree(&mut rng, &table);
            assert!(tree.is_deterministic());
            assert!(crate::tree::solves(&tree, &table, crate::tree::SolveMode::Det));
        }
    }
}
