//! Representable subsets of the two countable exemplars.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// The two built-in countable carriers.
///
/// `Fan` is `{x_inf} ∪ ⋃_n X_n` with disjoint countable rows `X_n`; the point
/// `(n, 0)` plays `x_n`. `Prime` is `{x_inf} ∪ {(0, p) : p ∈ ℕ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exemplar {
    Fan,
    Prime,
}

impl Exemplar {
    pub fn name(self) -> &'static str {
        match self {
            Exemplar::Fan => "FAN",
            Exemplar::Prime => "PRIME",
        }
    }
}

impl std::str::FromStr for Exemplar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fan" => Ok(Exemplar::Fan),
            "prime" => Ok(Exemplar::Prime),
            _ => Err(Error::Document(format!("unknown exemplar {s:?}"))),
        }
    }
}

/// A point: the marked point or a position inside a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Infinity,
    At { row: u64, pos: u64 },
}

impl Point {
    pub fn at(row: u64, pos: u64) -> Self {
        Point::At { row, pos }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::At { row, pos } => write!(f, "({row},{pos})"),
        }
    }
}

/// A finite or cofinite set of positions within one row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RowSet {
    cofinite: bool,
    points: BTreeSet<u64>,
}

impl RowSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        RowSet {
            cofinite: true,
            points: BTreeSet::new(),
        }
    }

    pub fn finite(points: impl IntoIterator<Item = u64>) -> Self {
        RowSet {
            cofinite: false,
            points: points.into_iter().collect(),
        }
    }

    /// All positions except `excluded`.
    pub fn cofinite(excluded: impl IntoIterator<Item = u64>) -> Self {
        RowSet {
            cofinite: true,
            points: excluded.into_iter().collect(),
        }
    }

    pub fn is_cofinite(&self) -> bool {
        self.cofinite
    }

    /// Listed positions: members if finite, exclusions if cofinite.
    pub fn listed(&self) -> &BTreeSet<u64> {
        &self.points
    }

    pub fn contains(&self, pos: u64) -> bool {
        self.cofinite != self.points.contains(&pos)
    }

    pub fn is_empty(&self) -> bool {
        !self.cofinite && self.points.is_empty()
    }

    pub fn complement(&self) -> Self {
        RowSet {
            cofinite: !self.cofinite,
            points: self.points.clone(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        match (self.cofinite, other.cofinite) {
            (false, false) => RowSet::finite(self.points.union(&other.points).copied()),
            (true, true) => RowSet::cofinite(self.points.intersection(&other.points).copied()),
            (false, true) => RowSet::cofinite(other.points.difference(&self.points).copied()),
            (true, false) => RowSet::cofinite(self.points.difference(&other.points).copied()),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }

    fn max_constant(&self) -> Option<u64> {
        self.points.iter().next_back().copied()
    }
}

/// A representable subset: membership of the marked point, an explicit row
/// set for finitely many rows, and a default row set for all other rows.
///
/// The class is a Boolean algebra, so union, intersection and complement
/// never leave it. On `Prime` the default is empty and only row 0 is used.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicSet {
    carrier: Exemplar,
    infinity: bool,
    default: RowSet,
    rows: BTreeMap<u64, RowSet>,
}

impl SymbolicSet {
    pub fn empty(carrier: Exemplar) -> Self {
        SymbolicSet {
            carrier,
            infinity: false,
            default: RowSet::empty(),
            rows: BTreeMap::new(),
        }
    }

    pub fn full(carrier: Exemplar) -> Self {
        match carrier {
            Exemplar::Fan => SymbolicSet {
                carrier,
                infinity: true,
                default: RowSet::full(),
                rows: BTreeMap::new(),
            },
            Exemplar::Prime => Self::empty(carrier).with_infinity(true).with_row(0, RowSet::full()),
        }
    }

    /// Builds a set, rejecting shapes the carrier cannot hold.
    pub fn new(carrier: Exemplar, infinity: bool, default: RowSet, rows: BTreeMap<u64, RowSet>) -> Result<Self> {
        if carrier == Exemplar::Prime {
            if !default.is_empty() {
                return Err(Error::Unrepresentable {
                    carrier: carrier.name(),
                    reason: "only row 0 exists".into(),
                });
            }
            if let Some((r, _)) = rows.iter().find(|(r, s)| **r != 0 && !s.is_empty()) {
                return Err(Error::Unrepresentable {
                    carrier: carrier.name(),
                    reason: format!("row {r} does not exist"),
                });
            }
        }
        Ok(SymbolicSet {
            carrier,
            infinity,
            default,
            rows,
        }
        .normalized())
    }

    pub fn point(carrier: Exemplar, p: Point) -> Self {
        Self::finite(carrier, [p])
    }

    pub fn finite(carrier: Exemplar, points: impl IntoIterator<Item = Point>) -> Self {
        let mut set = Self::empty(carrier);
        for p in points {
            match p {
                Point::Infinity => set.infinity = true,
                Point::At { row, pos } => {
                    set.rows.entry(row).or_default().points.insert(pos);
                }
            }
        }
        set.normalized()
    }

    /// The whole row `X_row`.
    pub fn row(carrier: Exemplar, row: u64) -> Self {
        Self::empty(carrier).with_row(row, RowSet::full())
    }

    /// `{x_n : n ∈ ℕ}` on FAN.
    pub fn spine() -> Self {
        SymbolicSet {
            carrier: Exemplar::Fan,
            infinity: false,
            default: RowSet::finite([0]),
            rows: BTreeMap::new(),
        }
    }

    /// `X_inf = {x_inf, x_0, x_1, ...}` on FAN.
    pub fn x_infinity() -> Self {
        Self::spine().with_infinity(true)
    }

    pub fn with_infinity(mut self, on: bool) -> Self {
        self.infinity = on;
        self
    }

    pub fn with_row(mut self, row: u64, set: RowSet) -> Self {
        self.rows.insert(row, set);
        self.normalized()
    }

    pub fn with_default(mut self, set: RowSet) -> Self {
        self.default = set;
        self.normalized()
    }

    fn normalized(mut self) -> Self {
        let default = self.default.clone();
        self.rows.retain(|_, s| *s != default);
        self
    }

    pub fn carrier(&self) -> Exemplar {
        self.carrier
    }

    pub fn has_infinity(&self) -> bool {
        self.infinity
    }

    pub fn default_row(&self) -> &RowSet {
        &self.default
    }

    pub fn explicit_rows(&self) -> &BTreeMap<u64, RowSet> {
        &self.rows
    }

    pub fn row_set(&self, row: u64) -> &RowSet {
        self.rows.get(&row).unwrap_or(&self.default)
    }

    pub fn contains(&self, p: Point) -> bool {
        match p {
            Point::Infinity => self.infinity,
            Point::At { row, pos } => self.row_set(row).contains(pos),
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(&RowSet, &RowSet) -> RowSet, inf: bool) -> Result<Self> {
        if self.carrier != other.carrier {
            return Err(Error::CarrierMismatch);
        }
        let keys: BTreeSet<u64> = self.rows.keys().chain(other.rows.keys()).copied().collect();
        let rows = keys
            .into_iter()
            .map(|k| (k, op(self.row_set(k), other.row_set(k))))
            .collect();
        Ok(SymbolicSet {
            carrier: self.carrier,
            infinity: inf,
            default: op(&self.default, &other.default),
            rows,
        }
        .normalized())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.combine(other, RowSet::union, self.infinity || other.infinity)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.combine(other, RowSet::intersection, self.infinity && other.infinity)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.intersection(&other.complement())
    }

    /// Complement within the carrier.
    pub fn complement(&self) -> Self {
        let flipped = SymbolicSet {
            carrier: self.carrier,
            infinity: !self.infinity,
            default: self.default.complement(),
            rows: self.rows.iter().map(|(k, s)| (*k, s.complement())).collect(),
        };
        flipped.intersection(&Self::full(self.carrier)).expect("same carrier")
    }

    pub fn is_empty(&self) -> bool {
        !self.infinity && self.default.is_empty() && self.rows.values().all(RowSet::is_empty)
    }

    /// A nonempty default fills infinitely many rows; a cofinite row is
    /// infinite on its own.
    pub fn is_infinite(&self) -> bool {
        !self.default.is_empty() || self.rows.values().any(RowSet::is_cofinite)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn meets(&self, other: &Self) -> Result<bool> {
        Ok(!self.intersection(other)?.is_empty())
    }

    /// Members of a finite set, `None` if infinite.
    pub fn finite_points(&self) -> Option<Vec<Point>> {
        if self.is_infinite() {
            return None;
        }
        let mut out = Vec::new();
        if self.infinity {
            out.push(Point::Infinity);
        }
        for (row, s) in &self.rows {
            out.extend(s.points.iter().map(|&pos| Point::at(*row, pos)));
        }
        Some(out)
    }

    /// Largest row index or position mentioned; truncations at `k` are
    /// faithful once `k ≥ max_constant + 3`, when every nonempty part also
    /// shows an inner point and every infinite part reaches the shell.
    pub fn max_constant(&self) -> u64 {
        let rows = self.rows.iter().map(|(k, s)| (*k).max(s.max_constant().unwrap_or(0)));
        rows.chain(self.default.max_constant()).max().unwrap_or(0)
    }

    pub fn stability_bound(&self) -> u64 {
        self.max_constant() + 3
    }
}

impl fmt::Display for RowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = self.points.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        if self.cofinite {
            if self.points.is_empty() {
                write!(f, "all")
            } else {
                write!(f, "all-{{{list}}}")
            }
        } else {
            write!(f, "{{{list}}}")
        }
    }
}

impl fmt::Display for SymbolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.infinity {
            parts.push("inf".to_string());
        }
        for (row, s) in &self.rows {
            if !s.is_empty() {
                parts.push(format!("row {row}: {s}"));
            }
        }
        if !self.default.is_empty() {
            parts.push(format!("other rows: {}", self.default));
        }
        if parts.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "[{}]", parts.join("; "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_set_algebra() {
        let a = RowSet::finite([1, 2]);
        let b = RowSet::cofinite([2, 3]);
        assert_eq!(a.union(&b), RowSet::cofinite([3]));
        assert_eq!(a.intersection(&b), RowSet::finite([1]));
        assert_eq!(b.complement(), RowSet::finite([2, 3]));
        assert!(RowSet::full().contains(99));
    }

    #[test]
    fn x_infinity_is_infinite_and_rows_are_finite_in_it() {
        let x = SymbolicSet::x_infinity();
        assert!(x.is_infinite());
        assert!(x.contains(Point::Infinity));
        assert!(x.contains(Point::at(7, 0)));
        assert!(!x.contains(Point::at(7, 1)));
        let row = SymbolicSet::row(Exemplar::Fan, 3);
        assert!(row.intersection(&x).unwrap().is_finite());
    }

    #[test]
    fn complement_round_trip() {
        let s = SymbolicSet::x_infinity().with_row(2, RowSet::cofinite([4]));
        assert_eq!(s.complement().complement(), s);
        assert!(s.union(&s.complement()).unwrap() == SymbolicSet::full(Exemplar::Fan));
    }

    #[test]
    fn prime_rejects_other_rows() {
        let bad = SymbolicSet::new(
            Exemplar::Prime,
            false,
            RowSet::empty(),
            BTreeMap::from([(1, RowSet::full())]),
        );
        assert!(bad.is_err());
        let full = SymbolicSet::full(Exemplar::Prime);
        assert!(full.complement().is_empty());
        assert!(full.is_infinite());
    }
}
