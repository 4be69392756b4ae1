//! Cofinite filters `(B/A)₀ = {F : A ⊆ F, B ∖ F finite}`.

use std::fmt;

use super::set::{Exemplar, Point, SymbolicSet};
use crate::error::{Error, Result};

/// A cofinite filter of `b` centered at `a`, with `a ⊆ b`.
///
/// Finite meets and joins of such filters are again single generators:
/// `(B₁/A₁)₀ ∧ (B₂/A₂)₀ = (B₁∪B₂ / A₁∪A₂)₀` and
/// `(B₁/A₁)₀ ∨ (B₂/A₂)₀ = (B₁∩B₂ / A₁∩A₂)₀`, so a generator list is always
/// canonicalized to one pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicFilter {
    b: SymbolicSet,
    a: SymbolicSet,
}

/// Ultrafilters finer than a cofinite filter: the principal ones sit at the
/// points of the center, free ones exist iff the center is infinite or the
/// center is empty and the base set infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UltrafiltersAbove {
    pub principal_at: SymbolicSet,
    pub free: bool,
}

impl SymbolicFilter {
    pub fn cofinite(b: SymbolicSet, a: SymbolicSet) -> Result<Self> {
        if !a.is_subset_of(&b)? {
            return Err(Error::NotAFilter(format!("center {a} is not inside {b}")));
        }
        Ok(SymbolicFilter { b, a })
    }

    /// `(B)₀`.
    pub fn cofinite_of(b: SymbolicSet) -> Self {
        let a = SymbolicSet::empty(b.carrier());
        SymbolicFilter { b, a }
    }

    /// `↑A = (A/A)₀`.
    pub fn principal(a: SymbolicSet) -> Self {
        SymbolicFilter { b: a.clone(), a }
    }

    pub fn point(carrier: Exemplar, p: Point) -> Self {
        Self::principal(SymbolicSet::point(carrier, p))
    }

    /// The elementary filter of a sequence with range `range`, in which
    /// exactly the points of `recurrent` occur infinitely often.
    pub fn of_sequence(range: SymbolicSet, recurrent: SymbolicSet) -> Result<Self> {
        if range.is_finite() && recurrent.is_empty() {
            return Err(Error::NotAFilter("a finite range has a recurrent point".into()));
        }
        Self::cofinite(range, recurrent)
    }

    /// Meet of a nonempty generator list.
    pub fn meet_all(generators: &[SymbolicFilter]) -> Result<Self> {
        let (first, rest) = generators.split_first().ok_or(Error::EmptyList)?;
        rest.iter().try_fold(first.clone(), |acc, g| acc.meet(g))
    }

    pub fn base_set(&self) -> &SymbolicSet {
        &self.b
    }

    pub fn center(&self) -> &SymbolicSet {
        &self.a
    }

    pub fn carrier(&self) -> Exemplar {
        self.b.carrier()
    }

    pub fn contains(&self, s: &SymbolicSet) -> Result<bool> {
        Ok(self.a.is_subset_of(s)? && self.b.difference(s)?.is_finite())
    }

    pub fn is_degenerate(&self) -> bool {
        self.a.is_empty() && self.b.is_finite()
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        Ok(SymbolicFilter {
            b: self.b.union(&other.b)?,
            a: self.a.union(&other.a)?,
        })
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        Ok(SymbolicFilter {
            b: self.b.intersection(&other.b)?,
            a: self.a.intersection(&other.a)?,
        })
    }

    /// `self ⊆ other` as families, i.e. `self` is coarser.
    pub fn is_coarser_than(&self, other: &Self) -> Result<bool> {
        Ok(other.a.is_subset_of(&self.a)? && other.b.difference(&self.b)?.is_finite())
    }

    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        Ok(self.is_coarser_than(other)? && other.is_coarser_than(self)?)
    }

    /// Every member of `self` meets every member of `other`.
    pub fn meshes(&self, other: &Self) -> Result<bool> {
        Ok(self.a.meets(&other.a)? || self.b.intersection(&other.b)?.is_infinite())
    }

    /// `⋂ members`, which is the center.
    pub fn kernel(&self) -> &SymbolicSet {
        &self.a
    }

    pub fn is_free(&self) -> bool {
        self.a.is_empty()
    }

    /// Principal filters are those with `B ∖ A` finite.
    pub fn is_principal(&self) -> Result<bool> {
        Ok(self.b.difference(&self.a)?.is_finite())
    }

    /// Single-generator form over a countable set; holds for every
    /// non-degenerate representable filter.
    pub fn is_sequential(&self) -> bool {
        !self.is_degenerate()
    }

    /// `(free part, principal part) = ((B∖A)₀, ↑A)`; either may be degenerate.
    pub fn decompose(&self) -> Result<(SymbolicFilter, SymbolicFilter)> {
        let free = Self::cofinite_of(self.b.difference(&self.a)?);
        Ok((free, Self::principal(self.a.clone())))
    }

    /// The point `x` with `self = ↑{x}`, if any.
    pub fn principal_ultrafilter_point(&self) -> Result<Option<Point>> {
        if !self.is_principal()? {
            return Ok(None);
        }
        Ok(match self.a.finite_points().as_deref() {
            Some([p]) => Some(*p),
            _ => None,
        })
    }

    pub fn ultrafilters_above(&self) -> UltrafiltersAbove {
        let free = if self.a.is_empty() {
            self.b.is_infinite()
        } else {
            self.a.is_infinite()
        };
        UltrafiltersAbove {
            principal_at: self.a.clone(),
            free,
        }
    }
}

impl fmt::Display for SymbolicFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} / {})_0", self.b, self.a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::set::RowSet;

    const FAN: Exemplar = Exemplar::Fan;

    fn row(r: u64) -> SymbolicSet {
        SymbolicSet::row(FAN, r)
    }

    #[test]
    fn cofinite_filter_meshes_itself() {
        let f = SymbolicFilter::cofinite_of(row(0));
        assert!(f.meshes(&f).unwrap());
    }

    #[test]
    fn centered_filter_meshes_its_center() {
        let x = Point::at(1, 0);
        let b = row(2).union(&SymbolicSet::point(FAN, x)).unwrap();
        let f = SymbolicFilter::cofinite(b, SymbolicSet::point(FAN, x)).unwrap();
        assert!(f.meshes(&SymbolicFilter::point(FAN, x)).unwrap());
    }

    #[test]
    fn almost_disjoint_bases_do_not_mesh() {
        let b1 = row(0).union(&SymbolicSet::point(FAN, Point::at(1, 0))).unwrap();
        let b2 = row(1);
        let f1 = SymbolicFilter::cofinite_of(b1);
        let f2 = SymbolicFilter::cofinite_of(b2);
        assert!(!f1.meshes(&f2).unwrap());
    }

    #[test]
    fn decomposition() {
        let a = SymbolicSet::point(FAN, Point::Infinity);
        let b = SymbolicSet::x_infinity();
        let f = SymbolicFilter::cofinite(b.clone(), a.clone()).unwrap();
        let (free, principal) = f.decompose().unwrap();
        assert!(free
            .equivalent(&SymbolicFilter::cofinite_of(SymbolicSet::spine()))
            .unwrap());
        assert_eq!(principal, SymbolicFilter::principal(a));
        assert!(free.meet(&principal).unwrap().equivalent(&f).unwrap());
        assert!(free.join(&principal).unwrap().is_degenerate());

        let up = SymbolicFilter::principal(SymbolicSet::point(FAN, Point::at(3, 3)));
        let (free, principal) = up.decompose().unwrap();
        assert!(free.is_degenerate());
        assert_eq!(principal, up);

        let (free, principal) = SymbolicFilter::cofinite_of(row(4)).decompose().unwrap();
        assert!(principal.is_degenerate());
        assert!(free.is_free() && !free.is_degenerate());
    }

    #[test]
    fn sequences() {
        let prime = Exemplar::Prime;
        let all = SymbolicSet::full(prime).with_infinity(false);
        let harmonic = SymbolicFilter::of_sequence(all.clone(), SymbolicSet::empty(prime)).unwrap();
        assert!(harmonic.is_sequential() && harmonic.is_free());
        let one = SymbolicSet::point(prime, Point::at(0, 0));
        let constant = SymbolicFilter::of_sequence(one.clone(), one.clone()).unwrap();
        assert!(constant.is_sequential() && constant.is_principal().unwrap());
        assert_eq!(constant.principal_ultrafilter_point().unwrap(), Some(Point::at(0, 0)));
        let returning = SymbolicFilter::of_sequence(all.clone(), all.clone()).unwrap();
        assert!(returning.is_principal().unwrap());
        assert!(returning.equivalent(&SymbolicFilter::principal(all)).unwrap());
    }

    #[test]
    fn meets_of_generators_stay_single() {
        let f = SymbolicFilter::cofinite_of(row(0));
        let g = SymbolicFilter::cofinite_of(row(1));
        let m = SymbolicFilter::meet_all(&[f.clone(), g.clone()]).unwrap();
        assert!(m.is_sequential());
        assert!(m.is_coarser_than(&f).unwrap() && m.is_coarser_than(&g).unwrap());
        let j = f.join(&g).unwrap();
        assert!(j.is_degenerate() && !j.is_sequential());
    }

    #[test]
    fn coarser_examples() {
        let x = SymbolicFilter::cofinite_of(SymbolicSet::full(FAN));
        let r = SymbolicFilter::cofinite_of(row(0).with_row(0, RowSet::cofinite([5])));
        assert!(x.is_coarser_than(&r).unwrap());
        assert!(!r.is_coarser_than(&x).unwrap());
        let up = SymbolicFilter::point(FAN, Point::at(0, 1));
        assert!(!x.is_coarser_than(&up).unwrap());
    }
}
