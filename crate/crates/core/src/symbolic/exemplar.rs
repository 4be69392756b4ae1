//! The two infinite exemplars: a pretopology on FAN that is not a topology,
//! and a convergence on PRIME that is not a pseudotopology.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::filter::SymbolicFilter;
use super::set::{Exemplar, Point, RowSet, SymbolicSet};
use crate::error::Result;

const FAN: Exemplar = Exemplar::Fan;
const PRIME: Exemplar = Exemplar::Prime;

/// Vicinity filter of the FAN pretopology: `(X_n / {x_n})₀` at `x_n`,
/// `(X_inf / {x_inf})₀` at `x_inf`, principal elsewhere.
pub fn fan_vicinity(p: Point) -> SymbolicFilter {
    let at = SymbolicSet::point(FAN, p);
    let b = match p {
        Point::Infinity => SymbolicSet::x_infinity(),
        Point::At { row, pos: 0 } => SymbolicSet::row(FAN, row),
        Point::At { .. } => at.clone(),
    };
    SymbolicFilter::cofinite(b, at).expect("every point lies in its base set")
}

fn in_vicinity(p: Point, s: &SymbolicSet) -> bool {
    fan_vicinity(p).contains(s).expect("same carrier")
}

/// `{x ∈ S : S ∈ V(x)}`. Isolated points always stay; `x_n` stays iff the
/// row of `S` is cofinite; `x_inf` is tested directly.
pub fn fan_core(s: &SymbolicSet) -> SymbolicSet {
    let keep = |r: &RowSet| {
        if r.contains(0) && !r.is_cofinite() {
            let mut pts: BTreeSet<u64> = r.listed().clone();
            pts.remove(&0);
            RowSet::finite(pts)
        } else {
            r.clone()
        }
    };
    let rows: BTreeMap<u64, RowSet> = s.explicit_rows().iter().map(|(k, r)| (*k, keep(r))).collect();
    let infinity = s.has_infinity() && in_vicinity(Point::Infinity, s);
    SymbolicSet::new(FAN, infinity, keep(s.default_row()), rows).expect("FAN holds every shape")
}

pub fn fan_is_open(s: &SymbolicSet) -> bool {
    fan_core(s) == *s
}

/// Greatest open subset, by iterating the core to its fixed point. Every
/// open subset of `S` survives each step, so the fixed point is exact.
pub fn fan_interior(s: &SymbolicSet) -> (SymbolicSet, usize) {
    let mut current = s.clone();
    let mut steps = 0;
    loop {
        let next = fan_core(&current);
        if next == current {
            return (current, steps);
        }
        current = next;
        steps += 1;
    }
}

/// Every representable set whose constants stay below `bound`.
pub fn representable_sets(carrier: Exemplar, bound: u64) -> Vec<SymbolicSet> {
    let subsets: Vec<Vec<u64>> = (0..1u32 << bound)
        .map(|m| (0..bound).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    let mut row_sets = Vec::new();
    for s in &subsets {
        row_sets.push(RowSet::finite(s.iter().copied()));
        row_sets.push(RowSet::cofinite(s.iter().copied()));
    }
    let rows_used: Vec<u64> = match carrier {
        Exemplar::Fan => (0..bound).collect(),
        Exemplar::Prime => vec![0],
    };
    let defaults = match carrier {
        Exemplar::Fan => row_sets.clone(),
        Exemplar::Prime => vec![RowSet::empty()],
    };
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for infinity in [false, true] {
        for default in &defaults {
            let mut choices: Vec<BTreeMap<u64, RowSet>> = vec![BTreeMap::new()];
            for &r in &rows_used {
                choices = choices
                    .iter()
                    .flat_map(|c| {
                        row_sets.iter().map(move |rs| {
                            let mut m = c.clone();
                            m.insert(r, rs.clone());
                            m
                        })
                    })
                    .collect();
            }
            for rows in choices {
                let s =
                    SymbolicSet::new(carrier, infinity, default.clone(), rows).expect("shapes are built per carrier");
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FanReport {
    /// `X_inf ∈ V(x_inf)`.
    pub x_infinity_in_vicinity: bool,
    /// Interior of `X_inf` under the topological modification.
    pub interior_of_x_infinity: String,
    pub interior_steps: usize,
    /// The interior misses `x_inf`, so `X_inf ∉ N(x_inf)`.
    pub x_infinity_not_a_neighborhood: bool,
    pub representable_sets_checked: usize,
    pub representable_opens: usize,
    /// Opens containing `x_n` contain a cofinite part of `X_n`.
    pub open_shape_holds: bool,
    /// No representable open `O` with `x_inf ∈ O ⊆ X_inf`.
    pub no_open_between: bool,
    pub counterexample: Option<String>,
    pub not_a_topology: bool,
}

impl FanReport {
    pub fn passed(&self) -> bool {
        self.x_infinity_in_vicinity
            && self.x_infinity_not_a_neighborhood
            && self.open_shape_holds
            && self.no_open_between
            && self.not_a_topology
    }
}

/// Bound on constants for the enumerated slice of the representable class.
pub const FAN_ENUMERATION_BOUND: u64 = 2;

pub fn fan_check() -> Result<FanReport> {
    let x_inf = SymbolicSet::x_infinity();
    let x_infinity_in_vicinity = fan_vicinity(Point::Infinity).contains(&x_inf)?;
    let (interior, interior_steps) = fan_interior(&x_inf);
    let x_infinity_not_a_neighborhood = !interior.contains(Point::Infinity);

    let sets = representable_sets(FAN, FAN_ENUMERATION_BOUND);
    let mut opens = 0;
    let mut open_shape_holds = true;
    let mut counterexample = None;
    for s in &sets {
        if !fan_is_open(s) {
            continue;
        }
        opens += 1;
        let rows_ok = s
            .explicit_rows()
            .values()
            .chain([s.default_row()])
            .all(|r| !r.contains(0) || r.is_cofinite());
        open_shape_holds &= rows_ok;
        if s.contains(Point::Infinity) && s.is_subset_of(&x_inf)? && counterexample.is_none() {
            counterexample = Some(s.to_string());
        }
    }
    let no_open_between = counterexample.is_none();
    Ok(FanReport {
        x_infinity_in_vicinity,
        interior_of_x_infinity: interior.to_string(),
        interior_steps,
        x_infinity_not_a_neighborhood,
        representable_sets_checked: sets.len(),
        representable_opens: opens,
        open_shape_holds,
        no_open_between,
        counterexample,
        not_a_topology: x_infinity_in_vicinity && x_infinity_not_a_neighborhood,
    })
}

/// Limits in the PRIME convergence of a representable filter: everything
/// for the degenerate filter, `{x}` for `↑{x}`, nothing otherwise. A
/// representable non-principal filter has `B ∖ A` infinite, which splits
/// into two infinite halves, so it is never an ultrafilter.
pub fn prime_limit(f: &SymbolicFilter) -> Result<SymbolicSet> {
    if f.is_degenerate() {
        return Ok(SymbolicSet::full(PRIME));
    }
    Ok(match f.principal_ultrafilter_point()? {
        Some(p) => SymbolicSet::point(PRIME, p),
        None => SymbolicSet::empty(PRIME),
    })
}

/// Limits in the pseudotopological modification: the intersection of the
/// limits of all finer ultrafilters. Principal ones at `x` give `{x}`, free
/// ones give `{x_inf}`.
pub fn prime_pseudo_limit(f: &SymbolicFilter) -> Result<SymbolicSet> {
    let above = f.ultrafilters_above();
    let mut limit = SymbolicSet::full(PRIME);
    if above.free {
        limit = limit.intersection(&SymbolicSet::point(PRIME, Point::Infinity))?;
    }
    match above.principal_at.finite_points() {
        Some(points) => {
            for p in points {
                limit = limit.intersection(&SymbolicSet::point(PRIME, p))?;
            }
        }
        None => {
            // Two distinct principal ultrafilters already give an empty meet.
            limit = SymbolicSet::empty(PRIME);
        }
    }
    Ok(limit)
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeReport {
    pub cofinite_filter: String,
    /// `(X)₀` is free and its members are exactly the cofinite sets, so it
    /// is refined by every free ultrafilter and by no principal one.
    pub cofinite_is_free: bool,
    pub members_are_cofinite_sets: bool,
    pub principal_ultrafilters_above: String,
    pub free_ultrafilters_above: bool,
    pub limit: String,
    pub pseudo_limit: String,
    pub limit_empty: bool,
    pub infinity_in_pseudo_limit: bool,
    pub not_a_pseudotopology: bool,
}

impl PrimeReport {
    pub fn passed(&self) -> bool {
        self.cofinite_is_free
            && self.members_are_cofinite_sets
            && self.free_ultrafilters_above
            && self.limit_empty
            && self.infinity_in_pseudo_limit
            && self.not_a_pseudotopology
    }
}

pub const PRIME_ENUMERATION_BOUND: u64 = 4;

pub fn prime_check() -> Result<PrimeReport> {
    let x = SymbolicSet::full(PRIME);
    let f = SymbolicFilter::cofinite_of(x);
    let mut members_are_cofinite_sets = true;
    for s in representable_sets(PRIME, PRIME_ENUMERATION_BOUND) {
        members_are_cofinite_sets &= f.contains(&s)? == s.complement().is_finite();
    }
    let above = f.ultrafilters_above();
    let limit = prime_limit(&f)?;
    let pseudo = prime_pseudo_limit(&f)?;
    let limit_empty = limit.is_empty();
    let infinity_in_pseudo_limit = pseudo.contains(Point::Infinity);
    Ok(PrimeReport {
        cofinite_filter: f.to_string(),
        cofinite_is_free: f.is_free() && !f.is_degenerate(),
        members_are_cofinite_sets,
        principal_ultrafilters_above: above.principal_at.to_string(),
        free_ultrafilters_above: above.free,
        limit: limit.to_string(),
        pseudo_limit: pseudo.to_string(),
        limit_empty,
        infinity_in_pseudo_limit,
        not_a_pseudotopology: limit_empty && infinity_in_pseudo_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan_is_a_pretopology_but_not_a_topology() {
        let r = fan_check().unwrap();
        assert!(r.x_infinity_in_vicinity);
        assert!(r.x_infinity_not_a_neighborhood);
        assert_eq!(r.interior_of_x_infinity, "{}");
        assert!(r.open_shape_holds && r.no_open_between);
        assert!(r.representable_opens > 0);
        assert!(r.passed());
    }

    #[test]
    fn fan_open_examples() {
        let row = SymbolicSet::row(FAN, 0);
        assert!(fan_is_open(&row));
        let tail = SymbolicSet::empty(FAN).with_row(0, RowSet::cofinite([1, 2]));
        assert!(fan_is_open(&tail));
        let x0 = SymbolicSet::point(FAN, Point::at(0, 0));
        assert!(!fan_is_open(&x0));
        assert!(fan_is_open(&SymbolicSet::point(FAN, Point::at(0, 1))));
        assert!(fan_is_open(&SymbolicSet::full(FAN)));
    }

    #[test]
    fn prime_is_not_a_pseudotopology() {
        let r = prime_check().unwrap();
        assert!(r.limit_empty);
        assert!(r.infinity_in_pseudo_limit);
        assert_eq!(r.pseudo_limit, "[inf]");
        assert!(r.passed());
    }

    #[test]
    fn prime_limits_of_principal_filters() {
        let inf = SymbolicFilter::point(PRIME, Point::Infinity);
        assert_eq!(prime_limit(&inf).unwrap(), SymbolicSet::point(PRIME, Point::Infinity));
        let p = SymbolicFilter::point(PRIME, Point::at(0, 3));
        assert_eq!(prime_pseudo_limit(&p).unwrap(), prime_limit(&p).unwrap());
    }
}
