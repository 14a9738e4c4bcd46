//! Parametric attribute families and the tables they generate.
//!
//! Attribute ids of the threshold (`l_i`), point (`p_i`) and full families
//! start at 1, following their usual indexing. Half-plane, feature-threshold
//! and custom families number their attributes from 0 in list order.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::table::{tuple_string, DecisionTable, Row};

pub type Rational = Ratio<i64>;

/// Largest number of distinct attributes the full family will enumerate.
pub const MAX_FULL_ATTRIBUTES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    Threshold,
    Point,
    Full,
    HalfPlane,
    FeatureThreshold,
    Custom,
}

impl FamilyKind {
    pub fn id(&self) -> &'static str {
        match self {
            FamilyKind::Threshold => "u1",
            FamilyKind::Point => "u2",
            FamilyKind::Full => "u3",
            FamilyKind::HalfPlane => "halfplane",
            FamilyKind::FeatureThreshold => "feature",
            FamilyKind::Custom => "custom",
        }
    }
}

/// A line `a·x + b·y + c = 0` with `(a, b) ≠ (0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Line {
    pub fn new(a: impl Into<Rational>, b: impl Into<Rational>, c: impl Into<Rational>) -> Self {
        Line {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    fn eval(&self, p: &(Rational, Rational)) -> Rational {
        self.a * p.0 + self.b * p.1 + self.c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlaneFamily {
    pub points: Vec<(Rational, Rational)>,
    pub lines: Vec<Line>,
}

impl HalfPlaneFamily {
    /// Attribute `2k` is 0 on the open side `a·x+b·y+c < 0` of line `k` and 1
    /// elsewhere; attribute `2k+1` is 0 on the open side `> 0` and 1 elsewhere.
    /// Both are 1 on the line itself.
    fn eval(&self, attr: usize, point: usize) -> bool {
        let v = self.lines[attr / 2].eval(&self.points[point]);
        let zero = Rational::from_integer(0);
        if attr.is_multiple_of(2) {
            v >= zero
        } else {
            v <= zero
        }
    }

    /// Integer grid `{0..b}²` cut by the lines `x = k`, `y = k`, `x + y = k`
    /// and `x − y = k` for every `k` that meets the grid.
    pub fn grid(b: i64) -> Self {
        let mut points = Vec::new();
        for x in 0..b {
            for y in 0..b {
                points.push((Rational::from_integer(x), Rational::from_integer(y)));
            }
        }
        let mut lines = Vec::new();
        for k in 0..b {
            lines.push(Line::new(1, 0, -k));
        }
        for k in 0..b {
            lines.push(Line::new(0, 1, -k));
        }
        for k in 0..(2 * b - 1) {
            lines.push(Line::new(1, 1, -k));
        }
        for k in -(b - 1)..b {
            lines.push(Line::new(1, -1, -k));
        }
        HalfPlaneFamily { points, lines }
    }
}

/// Attributes `s(x_f + c)` where `s(v) = 1` iff `v ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureFamily {
    /// One feature vector per universe object.
    pub objects: Vec<Vec<Rational>>,
    /// `(feature index, offset c)` per attribute.
    pub thresholds: Vec<(usize, Rational)>,
}

impl FeatureFamily {
    fn eval(&self, attr: usize, object: usize) -> bool {
        let (f, c) = self.thresholds[attr];
        self.objects[object][f] + c >= Rational::from_integer(0)
    }

    /// Two integer features on the grid `{0..b}²` with thresholds
    /// `x_f ≥ k` for `k = 1..b`.
    pub fn grid(b: i64) -> Self {
        let mut objects = Vec::new();
        for x in 0..b {
            for y in 0..b {
                objects.push(vec![Rational::from_integer(x), Rational::from_integer(y)]);
            }
        }
        let mut thresholds = Vec::new();
        for f in 0..2 {
            for k in 1..b {
                thresholds.push((f, Rational::from_integer(-k)));
            }
        }
        FeatureFamily { objects, thresholds }
    }
}

/// Explicit 0/1 matrix: `values[object][attribute]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CustomFamily {
    pub values: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AttributeFamily {
    /// `l_i(j) = 1` iff `j > i`, universe `{1, …, bound}`.
    Threshold {
        bound: Option<u64>,
    },
    /// `p_i(j) = 1` iff `j = i`, universe `{1, …, bound}`.
    Point {
        bound: Option<u64>,
    },
    /// Every function into `{0,1}`: any set of distinct attributes is independent.
    Full,
    HalfPlane(HalfPlaneFamily),
    FeatureThreshold(FeatureFamily),
    Custom(CustomFamily),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Labeling {
    /// Decisions `1, 2, 3, …` in row order.
    Injective,
    /// Every row gets decision 1.
    Constant,
    Explicit(BTreeMap<Vec<bool>, u32>),
}

impl AttributeFamily {
    pub fn kind(&self) -> FamilyKind {
        match self {
            AttributeFamily::Threshold { .. } => FamilyKind::Threshold,
            AttributeFamily::Point { .. } => FamilyKind::Point,
            AttributeFamily::Full => FamilyKind::Full,
            AttributeFamily::HalfPlane(_) => FamilyKind::HalfPlane,
            AttributeFamily::FeatureThreshold(_) => FamilyKind::FeatureThreshold,
            AttributeFamily::Custom(_) => FamilyKind::Custom,
        }
    }

    pub fn threshold() -> Self {
        AttributeFamily::Threshold { bound: None }
    }

    pub fn point() -> Self {
        AttributeFamily::Point { bound: None }
    }

    /// Number of attributes, for the families that have finitely many.
    pub fn attribute_count(&self) -> Option<usize> {
        match self {
            AttributeFamily::Threshold { .. } | AttributeFamily::Point { .. } | AttributeFamily::Full => None,
            AttributeFamily::HalfPlane(h) => Some(2 * h.lines.len()),
            AttributeFamily::FeatureThreshold(f) => Some(f.thresholds.len()),
            AttributeFamily::Custom(c) => Some(c.values.first().map_or(0, Vec::len)),
        }
    }

    fn check_attributes(&self, attrs: &[usize]) -> Result<()> {
        match self {
            AttributeFamily::Threshold { .. } | AttributeFamily::Point { .. } | AttributeFamily::Full => {
                if let Some(&bad) = attrs.iter().find(|&&a| a == 0) {
                    return Err(Error::UnknownAttribute(bad));
                }
            }
            _ => {
                let count = self.attribute_count().unwrap_or(0);
                if let Some(&bad) = attrs.iter().find(|&&a| a >= count) {
                    return Err(Error::UnknownAttribute(bad));
                }
            }
        }
        Ok(())
    }

    /// The set of tuples `(f_{i₁}(a), …, f_{iₙ}(a))` realized over the
    /// universe, in lexicographic order.
    pub fn realizable_tuples(&self, attrs: &[usize]) -> Result<BTreeSet<Vec<bool>>> {
        if attrs.is_empty() {
            return Err(Error::NoAttributes);
        }
        self.check_attributes(attrs)?;
        let max = *attrs.iter().max().expect("nonempty");
        let tuples = match self {
            AttributeFamily::Threshold { bound } | AttributeFamily::Point { bound } => {
                let needed = max as u64 + 1;
                let bound = bound.unwrap_or(needed);
                if bound < needed {
                    return Err(Error::UniverseTooSmall { bound, needed });
                }
                let threshold = matches!(self, AttributeFamily::Threshold { .. });
                (1..=bound)
                    .map(|j| {
                        attrs
                            .iter()
                            .map(|&i| if threshold { j > i as u64 } else { j == i as u64 })
                            .collect()
                    })
                    .collect()
            }
            AttributeFamily::Full => {
                let distinct: Vec<usize> = attrs.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
                if distinct.len() > MAX_FULL_ATTRIBUTES {
                    return Err(Error::ResourceLimit(format!(
                        "{} independent attributes exceed the enumeration cap {MAX_FULL_ATTRIBUTES}",
                        distinct.len()
                    )));
                }
                (0u64..1 << distinct.len())
                    .map(|mask| {
                        attrs
                            .iter()
                            .map(|a| {
                                let pos = distinct.binary_search(a).expect("present");
                                mask >> pos & 1 == 1
                            })
                            .collect()
                    })
                    .collect()
            }
            AttributeFamily::HalfPlane(h) => (0..h.points.len())
                .map(|p| attrs.iter().map(|&a| h.eval(a, p)).collect())
                .collect(),
            AttributeFamily::FeatureThreshold(f) => (0..f.objects.len())
                .map(|o| attrs.iter().map(|&a| f.eval(a, o)).collect())
                .collect(),
            AttributeFamily::Custom(c) => c
                .values
                .iter()
                .map(|obj| attrs.iter().map(|&a| obj[a]).collect())
                .collect(),
        };
        Ok(tuples)
    }
}

/// Enumerates the realizable tuples of `attrs` and labels them.
///
/// Rows come out in lexicographic tuple order; injective labeling numbers
/// them `1, 2, …` in that order.
pub fn generate(family: &AttributeFamily, attrs: &[usize], labeling: &Labeling) -> Result<DecisionTable> {
    let tuples = family.realizable_tuples(attrs)?;
    if tuples.is_empty() {
        return Err(Error::EmptyTable);
    }
    let rows = tuples
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let decision = match labeling {
                Labeling::Injective => i as u32 + 1,
                Labeling::Constant => 1,
                Labeling::Explicit(map) => *map.get(&t).ok_or_else(|| Error::MissingDecision(tuple_string(&t)))?,
            };
            Ok(Row::new(t, decision))
        })
        .collect::<Result<Vec<_>>>()?;
    let table = DecisionTable::new(attrs.len(), rows)?;
    let ids: Vec<String> = attrs.iter().map(ToString::to_string).collect();
    Ok(table.with_name(format!("{}[{}]", family.kind().id(), ids.join(","))))
}

/// The attribute selection used as the worst case at dimension `n`.
///
/// Threshold, point and full families use attributes `1..=n`. Half-plane
/// and feature-threshold families use a greedy search: each step adds the
/// unused attribute that maximizes the realizable-tuple count of the
/// selection so far, lowest id on ties.
pub fn canonical_worst_selection(family: &AttributeFamily, n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::NoAttributes);
    }
    match family {
        AttributeFamily::Threshold { .. } | AttributeFamily::Point { .. } | AttributeFamily::Full => {
            Ok((1..=n).collect())
        }
        AttributeFamily::HalfPlane(_) | AttributeFamily::FeatureThreshold(_) => {
            let available = family.attribute_count().unwrap_or(0);
            if available < n {
                return Err(Error::TooFewAttributes {
                    available,
                    requested: n,
                });
            }
            let mut chosen: Vec<usize> = Vec::with_capacity(n);
            for _ in 0..n {
                let mut best: Option<(usize, usize)> = None;
                for a in 0..available {
                    if chosen.contains(&a) {
                        continue;
                    }
                    chosen.push(a);
                    let count = family.realizable_tuples(&chosen)?.len();
                    chosen.pop();
                    if best.is_none_or(|(_, c)| count > c) {
                        best = Some((a, count));
                    }
                }
                chosen.push(best.expect("enough attributes").0);
            }
            Ok(chosen)
        }
        AttributeFamily::Custom(_) => Err(Error::Unsupported(
            "custom families have no canonical worst selection".into(),
        )),
    }
}
