use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{count_realizable, independence_dimension, reduction_parameter, ReductionScope};
use crate::error::{Error, Result};
use crate::family::{canonical_worst_selection, generate, AttributeFamily, Labeling};
use crate::solvers::{min_depth_det, min_depth_nondet, min_nodes_det, min_nodes_nondet, Optimality};
use crate::table::DecisionTable;

pub const PROFILE_CSV_HEADER: &str = "n,h_ld,h_la,L_ld,L_la,N,idim,m_hat";

/// Alternative selections tried per dimension when confirming the worst case.
const MAX_ALTERNATIVES: usize = 4096;
/// Dimensions up to which alternative selections are tried.
const CONFIRM_UP_TO: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub n: usize,
    pub h_ld: u32,
    pub h_la: u32,
    #[serde(rename = "L_ld")]
    pub l_ld: u32,
    #[serde(rename = "L_la")]
    pub l_la: u32,
    #[serde(rename = "N")]
    pub realizable: usize,
    pub idim: usize,
    pub m_hat: usize,
    pub selection: Vec<usize>,
    pub table: String,
    #[serde(rename = "L_la_optimality")]
    pub l_la_optimality: Optimality,
    /// Whether no alternative selection beat the canonical one on any of the
    /// four values; `None` when not checked.
    pub worst_confirmed: Option<bool>,
    pub alternatives_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorstCaseProfile {
    pub family: String,
    pub entries: Vec<ProfileEntry>,
}

impl WorstCaseProfile {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{PROFILE_CSV_HEADER}\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                e.n, e.h_ld, e.h_la, e.l_ld, e.l_la, e.realizable, e.idim, e.m_hat
            );
        }
        out
    }

    pub fn entry(&self, n: usize) -> Option<&ProfileEntry> {
        self.entries.iter().find(|e| e.n == n)
    }

    /// Broken profile invariants, one message each: monotonicity in `n`,
    /// `h_la ≤ h_ld ≤ n` and `L_la ≤ L_ld ≤ 2ⁿ⁺¹`.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for e in &self.entries {
            if !(e.h_la <= e.h_ld && e.h_ld as usize <= e.n) {
                out.push(format!(
                    "n={}: expected h_la <= h_ld <= n, got {} {}",
                    e.n, e.h_la, e.h_ld
                ));
            }
            if !(e.l_la <= e.l_ld && (e.n >= 31 || e.l_ld as u64 <= 1u64 << (e.n + 1))) {
                out.push(format!(
                    "n={}: expected L_la <= L_ld <= 2^(n+1), got {} {}",
                    e.n, e.l_la, e.l_ld
                ));
            }
        }
        for w in self.entries.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let pairs = [
                ("h_ld", a.h_ld, b.h_ld),
                ("h_la", a.h_la, b.h_la),
                ("L_ld", a.l_ld, b.l_ld),
                ("L_la", a.l_la, b.l_la),
            ];
            for (name, x, y) in pairs {
                if y < x {
                    out.push(format!("{name} decreases from n={} to n={}", a.n, b.n));
                }
            }
        }
        out
    }
}

/// Table for the canonical worst selection at dimension `n`, with injective
/// decisions.
pub fn worst_table(family: &AttributeFamily, n: usize) -> Result<DecisionTable> {
    let selection = canonical_worst_selection(family, n)?;
    generate(family, &selection, &Labeling::Injective)
}

struct Values {
    h_ld: u32,
    h_la: u32,
    l_ld: u32,
    l_la: u32,
    l_la_optimality: Optimality,
}

fn values(table: &DecisionTable) -> Result<Values> {
    let l_la = min_nodes_nondet(table)?;
    Ok(Values {
        h_ld: min_depth_det(table)?.value(),
        h_la: min_depth_nondet(table)?.value(),
        l_ld: min_nodes_det(table)?.value(),
        l_la: l_la.value(),
        l_la_optimality: l_la.optimality,
    })
}

/// Attribute selections of size `n` other than the canonical one, in
/// lexicographic order, at most `MAX_ALTERNATIVES` of them.
fn alternatives(family: &AttributeFamily, n: usize, canonical: &[usize]) -> Vec<Vec<usize>> {
    let pool: Vec<usize> = match family.attribute_count() {
        None => (1..=n + 2).collect(),
        Some(count) => (0..count).collect(),
    };
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    if pool.len() < n {
        return out;
    }
    loop {
        let pick: Vec<usize> = idx.iter().map(|&i| pool[i]).collect();
        if pick != canonical {
            out.push(pick);
            if out.len() == MAX_ALTERNATIVES {
                return out;
            }
        }
        let Some(pos) = (0..n).rev().find(|&p| idx[p] < pool.len() - n + p) else {
            return out;
        };
        idx[pos] += 1;
        for p in pos + 1..n {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

fn entry(family: &AttributeFamily, n: usize) -> Result<ProfileEntry> {
    let selection = canonical_worst_selection(family, n)?;
    let table = generate(family, &selection, &Labeling::Injective)?;
    let v = values(&table)?;
    let (worst_confirmed, alternatives_checked) = if n <= CONFIRM_UP_TO {
        let alts = alternatives(family, n, &selection);
        let beaten = alts
            .par_iter()
            .map(|alt| -> Result<bool> {
                let t = generate(family, alt, &Labeling::Injective)?;
                let w = values(&t)?;
                Ok(w.h_ld > v.h_ld || w.h_la > v.h_la || w.l_ld > v.l_ld || w.l_la > v.l_la)
            })
            .collect::<Result<Vec<_>>>()?;
        (Some(!beaten.iter().any(|&b| b)), alts.len())
    } else {
        (None, 0)
    };
    Ok(ProfileEntry {
        n,
        h_ld: v.h_ld,
        h_la: v.h_la,
        l_ld: v.l_ld,
        l_la: v.l_la,
        realizable: count_realizable(&table),
        idim: independence_dimension(&table),
        m_hat: reduction_parameter(&table, ReductionScope::FullRows)?,
        selection,
        table: table.name().unwrap_or_default().to_string(),
        l_la_optimality: v.l_la_optimality,
        worst_confirmed,
        alternatives_checked,
    })
}

/// The four worst-case values at each `n` in the range, computed on the
/// canonical worst selection with injective decisions.
pub fn worstcase_profile(family: &AttributeFamily, range: RangeInclusive<usize>) -> Result<WorstCaseProfile> {
    if range.is_empty() || *range.start() == 0 {
        return Err(Error::Unsupported(format!(
            "profile range {range:?} must be nonempty and start at n >= 1"
        )));
    }
    let entries = range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| entry(family, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(WorstCaseProfile {
        family: family.kind().id().to_string(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::HalfPlaneFamily;

    #[test]
    fn threshold_profile() {
        let p = worstcase_profile(&AttributeFamily::threshold(), 1..=6).unwrap();
        let col = |f: fn(&ProfileEntry) -> u32| p.entries.iter().map(f).collect::<Vec<_>>();
        assert_eq!(col(|e| e.h_ld), [1, 2, 2, 3, 3, 3]);
        assert_eq!(col(|e| e.h_la), [1, 2, 2, 2, 2, 2]);
        assert_eq!(col(|e| e.l_ld), [4, 6, 8, 10, 12, 14]);
        assert_eq!(col(|e| e.l_la), [4, 6, 8, 10, 12, 14]);
        assert!(p.violations().is_empty());
        assert_eq!(p.entry(2).unwrap().worst_confirmed, Some(true));
        assert_eq!(p.entry(3).unwrap().alternatives_checked, 9);
        assert_eq!(p.entry(5).unwrap().worst_confirmed, None);
    }

    #[test]
    fn point_and_full_profiles() {
        let p = worstcase_profile(&AttributeFamily::point(), 1..=5).unwrap();
        for e in &p.entries {
            assert_eq!((e.h_ld, e.h_la), (e.n as u32, e.n as u32));
            assert_eq!((e.l_ld, e.l_la), (2 * (e.n as u32 + 1), 2 * (e.n as u32 + 1)));
        }
        let p = worstcase_profile(&AttributeFamily::Full, 1..=4).unwrap();
        for e in &p.entries {
            assert_eq!((e.h_ld, e.h_la), (e.n as u32, e.n as u32));
            assert_eq!((e.l_ld, e.l_la), (1 << (e.n + 1), 1 << (e.n + 1)));
            assert_ne!(e.worst_confirmed, Some(false));
        }
    }

    #[test]
    fn csv_layout() {
        let p = worstcase_profile(&AttributeFamily::threshold(), 1..=2).unwrap();
        assert_eq!(
            p.to_csv(),
            "n,h_ld,h_la,L_ld,L_la,N,idim,m_hat\n1,1,1,4,4,2,1,1\n2,2,2,6,6,3,1,2\n"
        );
    }

    #[test]
    fn violations_are_detected() {
        let mut p = worstcase_profile(&AttributeFamily::threshold(), 1..=3).unwrap();
        p.entries[2].l_ld = 4;
        p.entries[0].h_la = 2;
        let v = p.violations();
        assert!(v.iter().any(|m| m.contains("L_ld decreases")));
        assert!(v.iter().any(|m| m.contains("n=1")));
    }

    #[test]
    fn alternative_enumeration() {
        let alts = alternatives(&AttributeFamily::threshold(), 2, &[1, 2]);
        assert_eq!(alts, vec![vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
        let grid = AttributeFamily::HalfPlane(HalfPlaneFamily::grid(3));
        let profile = worstcase_profile(&grid, 1..=2).unwrap();
        assert!(profile.entries.iter().all(|e| e.alternatives_checked > 0));
    }

    #[test]
    fn empty_ranges_are_refused() {
        #[allow(clippy::reversed_empty_ranges)]
        let r = worstcase_profile(&AttributeFamily::threshold(), 3..=2);
        assert!(r.is_err());
        assert!(worstcase_profile(&AttributeFamily::threshold(), 0..=2).is_err());
    }
}
