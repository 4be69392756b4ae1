//! Set families, principal filters, grills and relations on a finite carrier.
//!
//! Every subset is a bit vector over the carrier's points (bit `i` is point
//! `i`). A [`SetFamily`] is an explicit, duplicate-free list of subsets; a
//! [`FiniteFilter`] is stored by its minimal member, which every filter on a
//! finite set has.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest carrier a bit-vector subset can address.
pub const MAX_POINTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Carrier {
    labels: Vec<String>,
}

impl Carrier {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        if labels.len() > MAX_POINTS {
            return Err(Error::CapExceeded {
                size: labels.len(),
                cap: MAX_POINTS,
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Arc::new(Carrier { labels }))
    }

    /// Carrier labelled `a, b, c, …` (or `p0, p1, …` past 26 points).
    pub fn with_size(size: usize) -> Result<Arc<Self>> {
        let labels = (0..size).map(|i| {
            if size <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("p{i}")
            }
        });
        Carrier::new(labels)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, point: usize) -> &str {
        &self.labels[point]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size())
    }

    /// Number of subsets, `2^size`.
    pub fn powerset_len(&self) -> usize {
        1usize << self.size()
    }

    pub fn subset(&self, bits: u32) -> Result<Subset> {
        if bits & !self.full().bits() != 0 {
            return Err(Error::SubsetWidth {
                bits,
                size: self.size(),
            });
        }
        Ok(Subset(bits))
    }

    pub fn subset_of<S: AsRef<str>>(&self, labels: impl IntoIterator<Item = S>) -> Result<Subset> {
        let mut bits = 0;
        for l in labels {
            bits |= 1 << self.index_of(l.as_ref())?;
        }
        Ok(Subset(bits))
    }

    /// Labels of `set` in carrier order.
    pub fn labels_of(&self, set: Subset) -> Vec<&str> {
        set.points().map(|i| self.label(i)).collect()
    }

    pub fn format(&self, set: Subset) -> String {
        format!("{{{}}}", self.labels_of(set).join(","))
    }

    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        (0..self.powerset_len() as u32).map(Subset)
    }

    pub fn nonempty_subsets(&self) -> impl Iterator<Item = Subset> {
        (1..self.powerset_len() as u32).map(Subset)
    }
}

pub(crate) fn same_carrier(a: &Arc<Carrier>, b: &Arc<Carrier>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::CarrierMismatch)
    }
}

/// A subset of a finite carrier as a membership bit vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    pub fn full(size: usize) -> Self {
        Subset(((1u64 << size) - 1) as u32)
    }

    pub fn singleton(point: usize) -> Self {
        Subset(1 << point)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, point: usize) -> bool {
        self.0 >> point & 1 == 1
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// Complement within a carrier of `size` points.
    pub fn complement(self, size: usize) -> Subset {
        Subset(!self.0 & Subset::full(size).0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meets(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }

    /// All subsets of `self`, including `∅` and `self`.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(Subset(cur))
        })
    }
}

/// Bit set over the `2^n` subsets of a carrier; used to dedupe families.
#[derive(Clone)]
pub(crate) struct SubsetSet {
    words: Vec<u64>,
}

impl SubsetSet {
    pub(crate) fn new(size: usize) -> Self {
        SubsetSet {
            words: vec![0; ((1usize << size) + 63) / 64],
        }
    }

    pub(crate) fn insert(&mut self, s: Subset) {
        self.words[s.index() / 64] |= 1 << (s.index() % 64);
    }

    #[allow(dead_code)]
    pub(crate) fn contains(&self, s: Subset) -> bool {
        self.words[s.index() / 64] >> (s.index() % 64) & 1 == 1
    }

    pub(crate) fn into_sorted(self) -> Vec<Subset> {
        let mut out = Vec::new();
        for (w, &word) in self.words.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let bit = word.trailing_zeros() as usize;
                out.push(Subset((w * 64 + bit) as u32));
                word &= word - 1;
            }
        }
        out
    }
}

/// A finite family of subsets of one carrier. Members are kept sorted by
/// bit value and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    carrier: Arc<Carrier>,
    members: Vec<Subset>,
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.members.iter().map(|&m| self.carrier.format(m)))
            .finish()
    }
}

impl SetFamily {
    pub fn new(carrier: Arc<Carrier>, members: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let full = carrier.full();
        let mut members: Vec<Subset> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| !m.is_subset_of(full)) {
            return Err(Error::SubsetWidth {
                bits: bad.bits(),
                size: carrier.size(),
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(SetFamily { carrier, members })
    }

    pub(crate) fn from_sorted(carrier: Arc<Carrier>, members: Vec<Subset>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        SetFamily { carrier, members }
    }

    pub fn empty(carrier: Arc<Carrier>) -> Self {
        SetFamily {
            carrier,
            members: Vec::new(),
        }
    }

    pub fn single(carrier: Arc<Carrier>, set: Subset) -> Self {
        SetFamily {
            carrier,
            members: vec![set],
        }
    }

    pub fn powerset(carrier: Arc<Carrier>) -> Self {
        let members = carrier.subsets().collect();
        SetFamily { carrier, members }
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: Subset) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    /// `{H : H ⊇ A for some member A}`. The empty family stays empty.
    pub fn isotonize(&self) -> SetFamily {
        let n = self.carrier.size();
        let full = self.carrier.full();
        let mut seen = SubsetSet::new(n);
        for &a in &self.members {
            for extra in full.difference(a).subsets() {
                seen.insert(a.union(extra));
            }
        }
        SetFamily::from_sorted(self.carrier.clone(), seen.into_sorted())
    }

    pub fn is_isotone(&self) -> bool {
        let full = self.carrier.full();
        self.members.iter().all(|&a| {
            full.difference(a)
                .points()
                .all(|p| self.contains(a.union(Subset::singleton(p))))
        })
    }

    /// Sets meeting every member.
    pub fn grill(&self) -> SetFamily {
        let members = self
            .carrier
            .subsets()
            .filter(|&h| self.members.iter().all(|&a| h.meets(a)))
            .collect();
        SetFamily::from_sorted(self.carrier.clone(), members)
    }

    /// True when every member of `self` meets every member of `other`.
    pub fn meshes(&self, other: &SetFamily) -> Result<bool> {
        same_carrier(&self.carrier, &other.carrier)?;
        Ok(mesh_slices(&self.members, &other.members))
    }

    /// `self ≤ other`: every member of `self` includes some member of `other`.
    pub fn is_coarser_than(&self, other: &SetFamily) -> Result<bool> {
        same_carrier(&self.carrier, &other.carrier)?;
        Ok(self
            .members
            .iter()
            .all(|&a| other.members.iter().any(|&d| d.is_subset_of(a))))
    }

    pub fn complement_family(&self) -> SetFamily {
        let n = self.carrier.size();
        SetFamily::new(self.carrier.clone(), self.members.iter().map(|m| m.complement(n)))
            .expect("complements stay inside the carrier")
    }

    pub fn image(&self, rel: &FiniteRelation) -> Result<SetFamily> {
        same_carrier(&self.carrier, rel.source())?;
        SetFamily::new(rel.target().clone(), self.members.iter().map(|&a| rel.image(a)))
    }

    pub fn preimage(&self, rel: &FiniteRelation) -> Result<SetFamily> {
        same_carrier(&self.carrier, rel.target())?;
        SetFamily::new(rel.source().clone(), self.members.iter().map(|&b| rel.preimage(b)))
    }

    pub fn format(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(|&m| self.carrier.format(m)).collect();
        format!("[{}]", parts.join(" "))
    }
}

pub(crate) fn mesh_slices(a: &[Subset], b: &[Subset]) -> bool {
    a.iter().all(|&x| b.iter().all(|&y| x.meets(y)))
}

/// A filter on a finite carrier, stored as its minimal member.
///
/// The filter is `{F : F ⊇ base}`; `base = ∅` is the degenerate filter `2^X`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteFilter {
    carrier: Arc<Carrier>,
    base: Subset,
}

impl fmt::Debug for FiniteFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "↑{}", self.carrier.format(self.base))
    }
}

impl FiniteFilter {
    pub fn principal(carrier: Arc<Carrier>, base: Subset) -> Result<Self> {
        carrier.subset(base.bits())?;
        Ok(FiniteFilter { carrier, base })
    }

    pub fn point(carrier: Arc<Carrier>, point: usize) -> Result<Self> {
        FiniteFilter::principal(carrier, Subset::singleton(point))
    }

    pub fn degenerate(carrier: Arc<Carrier>) -> Self {
        FiniteFilter {
            carrier,
            base: Subset::EMPTY,
        }
    }

    /// Canonicalize an explicit member list. Fails unless the family is a
    /// filter: nonempty, upward closed and closed under intersections.
    pub fn from_family(fam: &SetFamily) -> Result<Self> {
        let members = fam.members();
        if members.is_empty() {
            return Err(Error::NotAFilter("empty family".into()));
        }
        let base = members.iter().fold(fam.carrier().full(), |acc, &m| acc.intersection(m));
        if !fam.contains(base) {
            return Err(Error::NotAFilter(format!(
                "intersection {} of the members is missing",
                fam.carrier().format(base)
            )));
        }
        let expected = 1usize << (fam.carrier().size() - base.len());
        if members.len() != expected || !fam.is_isotone() {
            return Err(Error::NotAFilter("family is not upward closed".into()));
        }
        Ok(FiniteFilter {
            carrier: fam.carrier().clone(),
            base,
        })
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn base(&self) -> Subset {
        self.base
    }

    pub fn is_degenerate(&self) -> bool {
        self.base.is_empty()
    }

    pub fn contains(&self, set: Subset) -> bool {
        self.base.is_subset_of(set)
    }

    pub fn members(&self) -> SetFamily {
        SetFamily::single(self.carrier.clone(), self.base).isotonize()
    }

    /// `{H : H ∩ base ≠ ∅}`; empty for the degenerate filter.
    pub fn grill(&self) -> SetFamily {
        self.members().grill()
    }

    /// Infimum: the filter of common members, based at the union.
    pub fn meet(&self, other: &FiniteFilter) -> Result<FiniteFilter> {
        same_carrier(&self.carrier, &other.carrier)?;
        Ok(FiniteFilter {
            carrier: self.carrier.clone(),
            base: self.base.union(other.base),
        })
    }

    /// Supremum: generated by intersections; degenerate when the bases are disjoint.
    pub fn join(&self, other: &FiniteFilter) -> Result<FiniteFilter> {
        same_carrier(&self.carrier, &other.carrier)?;
        Ok(FiniteFilter {
            carrier: self.carrier.clone(),
            base: self.base.intersection(other.base),
        })
    }

    /// `self ≤ other` as families, i.e. `other.base ⊆ self.base`.
    pub fn is_coarser_than(&self, other: &FiniteFilter) -> Result<bool> {
        same_carrier(&self.carrier, &other.carrier)?;
        Ok(other.base.is_subset_of(self.base))
    }

    /// The ultrafilters finer than `self`: the point filters of the base.
    pub fn ultrafilters(&self) -> Result<Vec<FiniteFilter>> {
        if self.is_degenerate() {
            return Err(Error::DegenerateFilter);
        }
        Ok(self
            .base
            .points()
            .map(|p| FiniteFilter {
                carrier: self.carrier.clone(),
                base: Subset::singleton(p),
            })
            .collect())
    }

    pub fn is_ultrafilter(&self) -> bool {
        self.base.len() == 1
    }
}

/// Result of the ultrafilter-selection check: the chosen ultrafilters (by
/// point) and the union of their selected members, which belongs to the filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionWitness {
    pub points: Vec<usize>,
    pub union: Subset,
}

/// Given a member `F_U ∈ U` for each ultrafilter `U` finer than `filter`
/// (indexed by the point of `U`), return a smallest sub-selection whose
/// union belongs to `filter`.
pub fn check_ultrafilter_selection(filter: &FiniteFilter, selection: &[(usize, Subset)]) -> Result<SelectionWitness> {
    let ultras = filter.ultrafilters()?;
    let carrier = filter.carrier();
    if selection.len() != ultras.len() {
        return Err(Error::InvalidSelection(format!(
            "expected {} selected members, got {}",
            ultras.len(),
            selection.len()
        )));
    }
    for &(point, member) in selection {
        carrier.subset(member.bits())?;
        if !filter.base().contains(point) {
            return Err(Error::InvalidSelection(format!(
                "{} is not an ultrafilter finer than the filter",
                carrier.label(point)
            )));
        }
        if !member.contains(point) {
            return Err(Error::InvalidSelection(format!(
                "{} does not belong to the ultrafilter at {}",
                carrier.format(member),
                carrier.label(point)
            )));
        }
    }
    let mut covered = Subset::EMPTY;
    for &(point, _) in selection {
        if covered.contains(point) {
            return Err(Error::InvalidSelection(format!(
                "ultrafilter at {} selected twice",
                carrier.label(point)
            )));
        }
        covered = covered.union(Subset::singleton(point));
    }
    let k = selection.len();
    let best = (0u32..1 << k)
        .filter_map(|mask| {
            let chosen: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let union = chosen.iter().fold(Subset::EMPTY, |acc, &i| acc.union(selection[i].1));
            filter.contains(union).then_some((chosen, union))
        })
        .min_by_key(|(chosen, _)| chosen.len())
        .expect("the full selection always covers the base");
    let mut points: Vec<usize> = best.0.iter().map(|&i| selection[i].0).collect();
    points.sort_unstable();
    Ok(SelectionWitness { points, union: best.1 })
}

/// A relation `R ⊆ W × Z` as one target bit row per source point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    source: Arc<Carrier>,
    target: Arc<Carrier>,
    rows: Vec<Subset>,
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (w, row) in self.rows.iter().enumerate() {
            m.entry(&self.source.label(w), &self.target.format(*row));
        }
        m.finish()
    }
}

impl FiniteRelation {
    pub fn new(source: Arc<Carrier>, target: Arc<Carrier>, rows: Vec<Subset>) -> Result<Self> {
        if rows.len() != source.size() {
            return Err(Error::NotAMap(format!(
                "{} rows for a source of {} points",
                rows.len(),
                source.size()
            )));
        }
        for r in &rows {
            target.subset(r.bits())?;
        }
        Ok(FiniteRelation { source, target, rows })
    }

    pub fn from_pairs(
        source: Arc<Carrier>,
        target: Arc<Carrier>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut rows = vec![Subset::EMPTY; source.size()];
        for (w, z) in pairs {
            if w >= source.size() || z >= target.size() {
                return Err(Error::NotAMap(format!("pair ({w},{z}) out of range")));
            }
            rows[w] = rows[w].union(Subset::singleton(z));
        }
        Ok(FiniteRelation { source, target, rows })
    }

    pub fn identity(carrier: Arc<Carrier>) -> Self {
        let rows = (0..carrier.size()).map(Subset::singleton).collect();
        FiniteRelation {
            source: carrier.clone(),
            target: carrier,
            rows,
        }
    }

    /// All relations between two carriers, in bit order of the adjacency matrix.
    pub fn all(source: &Arc<Carrier>, target: &Arc<Carrier>) -> Vec<FiniteRelation> {
        let (n, m) = (source.size(), target.size());
        let total = n * m;
        assert!(total < 20, "relation enumeration is capped at 2^19");
        (0u32..1 << total)
            .map(|code| {
                let rows = (0..n)
                    .map(|w| Subset::from_bits(code >> (w * m) & ((1 << m) - 1)))
                    .collect();
                FiniteRelation {
                    source: source.clone(),
                    target: target.clone(),
                    rows,
                }
            })
            .collect()
    }

    pub fn source(&self) -> &Arc<Carrier> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Carrier> {
        &self.target
    }

    /// `Rw`.
    pub fn at(&self, w: usize) -> Subset {
        self.rows[w]
    }

    pub fn contains(&self, w: usize, z: usize) -> bool {
        self.rows[w].contains(z)
    }

    /// `RA = ⋃_{w∈A} Rw`.
    pub fn image(&self, set: Subset) -> Subset {
        set.points().fold(Subset::EMPTY, |acc, w| acc.union(self.rows[w]))
    }

    /// `R⁻B = {w : Rw ∩ B ≠ ∅}`.
    pub fn preimage(&self, set: Subset) -> Subset {
        let bits = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.meets(set))
            .fold(0, |acc, (w, _)| acc | 1 << w);
        Subset::from_bits(bits)
    }

    pub fn inverse(&self) -> FiniteRelation {
        let rows = (0..self.target.size())
            .map(|z| self.preimage(Subset::singleton(z)))
            .collect();
        FiniteRelation {
            source: self.target.clone(),
            target: self.source.clone(),
            rows,
        }
    }

    /// `Rw₀ ∩ Rw₁ ≠ ∅ ⟹ w₀ = w₁`.
    pub fn is_injective(&self) -> bool {
        let mut seen = Subset::EMPTY;
        for &r in &self.rows {
            if seen.meets(r) {
                return false;
            }
            seen = seen.union(r);
        }
        true
    }

    /// `RW = Z`.
    pub fn is_surjective(&self) -> bool {
        self.image(self.source.full()) == self.target.full()
    }

    /// The relation as a subset of the product carrier `W × Z`, where the
    /// pair `(w, z)` is point `w * |Z| + z`.
    pub fn graph_bits(&self) -> Subset {
        let m = self.target.size();
        let bits = self
            .rows
            .iter()
            .enumerate()
            .fold(0u32, |acc, (w, r)| acc | r.bits() << (w * m));
        Subset::from_bits(bits)
    }

    /// Validate as a map: the inverse must be injective and surjective.
    pub fn as_map(&self) -> Result<CarrierMap> {
        let inv = self.inverse();
        if !inv.is_surjective() {
            return Err(Error::NotAMap("some source point has no image".into()));
        }
        if !inv.is_injective() {
            return Err(Error::NotAMap("some source point has several images".into()));
        }
        let images = self
            .rows
            .iter()
            .map(|r| r.points().next().expect("checked total"))
            .collect();
        Ok(CarrierMap {
            relation: self.clone(),
            images,
        })
    }
}

/// A total single-valued relation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CarrierMap {
    relation: FiniteRelation,
    images: Vec<usize>,
}

impl fmt::Debug for CarrierMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, &y) in self.images.iter().enumerate() {
            m.entry(&self.relation.source.label(x), &self.relation.target.label(y));
        }
        m.finish()
    }
}

impl CarrierMap {
    pub fn new(source: Arc<Carrier>, target: Arc<Carrier>, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.size() {
            return Err(Error::NotAMap(format!(
                "{} images for {} source points",
                images.len(),
                source.size()
            )));
        }
        let rel = FiniteRelation::from_pairs(source, target, images.iter().copied().enumerate())?;
        Ok(CarrierMap { relation: rel, images })
    }

    pub fn identity(carrier: Arc<Carrier>) -> Self {
        let images = (0..carrier.size()).collect();
        CarrierMap {
            relation: FiniteRelation::identity(carrier),
            images,
        }
    }

    pub fn source(&self) -> &Arc<Carrier> {
        &self.relation.source
    }

    pub fn target(&self) -> &Arc<Carrier> {
        &self.relation.target
    }

    pub fn relation(&self) -> &FiniteRelation {
        &self.relation
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn image(&self, set: Subset) -> Subset {
        self.relation.image(set)
    }

    pub fn preimage(&self, set: Subset) -> Subset {
        self.relation.preimage(set)
    }

    /// `f⁻(y)`.
    pub fn fiber(&self, y: usize) -> Subset {
        self.preimage(Subset::singleton(y))
    }

    pub fn is_surjective(&self) -> bool {
        self.relation.is_surjective()
    }

    pub fn is_injective(&self) -> bool {
        self.relation.is_injective()
    }

    /// `{y : f⁻(y) ⊆ set}`, the complement of `f(X ∖ set)`.
    pub fn small_image(&self, set: Subset) -> Subset {
        let n = self.source().size();
        self.image(set.complement(n)).complement(self.target().size())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x2() -> Arc<Carrier> {
        Carrier::with_size(2).unwrap()
    }

    fn x3() -> Arc<Carrier> {
        Carrier::with_size(3).unwrap()
    }

    fn fam(c: &Arc<Carrier>, sets: &[&[&str]]) -> SetFamily {
        SetFamily::new(c.clone(), sets.iter().map(|s| c.subset_of(s.iter()).unwrap())).unwrap()
    }

    #[test]
    fn carrier_rejects_bad_input() {
        assert!(matches!(Carrier::new(Vec::<String>::new()), Err(Error::EmptyCarrier)));
        assert!(matches!(Carrier::new(["a", "a"]), Err(Error::DuplicateLabel(_))));
        assert!(matches!(
            Carrier::with_size(17),
            Err(Error::CapExceeded { size: 17, .. })
        ));
        assert!(x2().subset(0b100).is_err());
    }

    #[test]
    fn isotonize_examples() {
        let c = x2();
        assert!(SetFamily::empty(c.clone()).isotonize().is_empty());
        assert_eq!(fam(&c, &[&["a"]]).isotonize(), fam(&c, &[&["a"], &["a", "b"]]));
        let c = x3();
        assert_eq!(
            fam(&c, &[&["a"], &["b", "c"]]).isotonize(),
            fam(&c, &[&["a"], &["a", "b"], &["a", "c"], &["a", "b", "c"], &["b", "c"]])
        );
    }

    #[test]
    fn grill_examples() {
        let c = x2();
        assert_eq!(SetFamily::empty(c.clone()).grill().len(), 4);
        assert_eq!(fam(&c, &[&["a"]]).grill(), fam(&c, &[&["a"], &["a", "b"]]));
        // brute force over the 8 subsets of {a,b,c}
        let c = x3();
        let g = fam(&c, &[&["a", "b"], &["b", "c"]]).grill();
        let expected: Vec<Subset> = c
            .subsets()
            .filter(|h| h.contains(1) || (h.contains(0) && h.contains(2)))
            .collect();
        assert_eq!(g.members(), expected.as_slice());
    }

    #[test]
    fn mesh_and_coarser() {
        let c = x2();
        let a = fam(&c, &[&["a"]]);
        let ab = fam(&c, &[&["a", "b"]]);
        let b = fam(&c, &[&["b"]]);
        assert!(a.meshes(&ab).unwrap());
        assert!(!a.meshes(&b).unwrap());
        assert!(ab.is_coarser_than(&a).unwrap());
        assert!(!a.is_coarser_than(&ab).unwrap());
        assert!(matches!(a.meshes(&fam(&x3(), &[])), Err(Error::CarrierMismatch)));
    }

    #[test]
    fn coarser_on_principal_filters_is_reverse_inclusion() {
        let c = x3();
        for a in c.subsets() {
            for b in c.subsets() {
                let fa = SetFamily::single(c.clone(), a).isotonize();
                let fb = SetFamily::single(c.clone(), b).isotonize();
                assert_eq!(fa.is_coarser_than(&fb).unwrap(), b.is_subset_of(a));
            }
        }
    }

    #[test]
    fn complement_family_is_involutive() {
        let c = x2();
        assert!(SetFamily::empty(c.clone()).complement_family().is_empty());
        assert_eq!(fam(&c, &[&["a"]]).complement_family(), fam(&c, &[&["b"]]));
        let c = x3();
        for code in 0u32..256 {
            let f = SetFamily::new(c.clone(), (0..8).filter(|i| code >> i & 1 == 1).map(Subset::from_bits)).unwrap();
            assert_eq!(f.complement_family().complement_family(), f);
        }
    }

    #[test]
    fn map_images_of_families() {
        let x = x3();
        let y = Carrier::new(["p", "q"]).unwrap();
        let f = CarrierMap::new(x.clone(), y.clone(), vec![0, 0, 1]).unwrap();
        let img = fam(&x, &[&["a"], &["c"]]).image(f.relation()).unwrap();
        assert_eq!(img, fam(&y, &[&["p"], &["q"]]));
        let id = FiniteRelation::identity(x.clone());
        let g = fam(&x, &[&["a", "b"], &["c"]]);
        assert_eq!(g.image(&id).unwrap(), g);
        assert_eq!(
            f.small_image(x.subset_of(["a", "b"]).unwrap()),
            y.subset_of(["p"]).unwrap()
        );
    }

    #[test]
    fn filter_lattice() {
        let c = x2();
        let a = FiniteFilter::point(c.clone(), 0).unwrap();
        let b = FiniteFilter::point(c.clone(), 1).unwrap();
        assert_eq!(a.meet(&b).unwrap().base(), c.full());
        assert!(a.join(&b).unwrap().is_degenerate());
        let deg = FiniteFilter::degenerate(c.clone());
        assert!(deg.grill().is_empty());
        assert!(matches!(deg.ultrafilters(), Err(Error::DegenerateFilter)));
    }

    #[test]
    fn ultrafilters_of_examples() {
        let c = x2();
        let a = FiniteFilter::point(c.clone(), 0).unwrap();
        assert_eq!(a.ultrafilters().unwrap(), vec![a.clone()]);
        let ab = FiniteFilter::principal(c.clone(), c.full()).unwrap();
        let b = FiniteFilter::point(c.clone(), 1).unwrap();
        assert_eq!(ab.ultrafilters().unwrap(), vec![a, b]);
    }

    #[test]
    fn filter_canonical_round_trip() {
        let c = x3();
        for base in c.subsets() {
            let f = FiniteFilter::principal(c.clone(), base).unwrap();
            assert_eq!(FiniteFilter::from_family(&f.members()).unwrap(), f);
        }
        assert!(FiniteFilter::from_family(&fam(&c, &[&["a"], &["b"]])).is_err());
        assert!(FiniteFilter::from_family(&fam(&c, &[&["a"]])).is_err());
    }

    #[test]
    fn ultrafilter_selection() {
        let c = x2();
        let a = FiniteFilter::point(c.clone(), 0).unwrap();
        let w = check_ultrafilter_selection(&a, &[(0, Subset::singleton(0))]).unwrap();
        assert_eq!(w.union, Subset::singleton(0));
        let ab = FiniteFilter::principal(c.clone(), c.full()).unwrap();
        let w = check_ultrafilter_selection(&ab, &[(0, Subset::singleton(0)), (1, Subset::singleton(1))]).unwrap();
        assert_eq!(w.union, c.full());
        assert_eq!(w.points, vec![0, 1]);
        // a selection covering everything from one ultrafilter is minimal
        let w = check_ultrafilter_selection(&ab, &[(0, c.full()), (1, Subset::singleton(1))]).unwrap();
        assert_eq!(w.points, vec![0]);
        assert!(matches!(
            check_ultrafilter_selection(&ab, &[(0, Subset::singleton(1)), (1, c.full())]),
            Err(Error::InvalidSelection(_))
        ));
    }

    #[test]
    fn relation_map_validation() {
        let c = x2();
        for r in FiniteRelation::all(&c, &c) {
            let is_map = (0..2).all(|w| r.at(w).len() == 1);
            assert_eq!(r.as_map().is_ok(), is_map, "{r:?}");
            let inv = r.inverse();
            assert_eq!(inv.is_injective() && inv.is_surjective(), is_map);
        }
    }

    #[test]
    fn map_injectivity() {
        let c = x2();
        let swap = CarrierMap::new(c.clone(), c.clone(), vec![1, 0]).unwrap();
        let collapse = CarrierMap::new(c.clone(), c.clone(), vec![0, 0]).unwrap();
        assert!(swap.is_injective());
        assert!(!collapse.is_injective());
    }
}
