//! Convergences on a finite carrier.
//!
//! On a finite set every filter is principal, so a convergence is a table
//! `A ↦ lim ↑A` over the nonempty subsets. Index 0 of the table (the empty
//! set) is unused and kept empty.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::{same_carrier, Carrier, FiniteFilter, SetFamily, Subset, MAX_POINTS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    Missing {
        set: String,
    },
    Centered {
        point: String,
    },
    Isotone {
        smaller: String,
        larger: String,
        point: String,
    },
    OutOfRange {
        set: String,
    },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Missing { set } => write!(f, "missing limit entry for {set}"),
            AxiomViolation::Centered { point } => {
                write!(f, "centered axiom violated at point {point}")
            }
            AxiomViolation::Isotone { smaller, larger, point } => write!(
                f,
                "isotone axiom violated: {point} is a limit of {larger} but not of {smaller}"
            ),
            AxiomViolation::OutOfRange { set } => {
                write!(f, "limit set for {set} leaves the carrier")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Convergence {
    carrier: Arc<Carrier>,
    lim: Vec<Subset>,
}

impl fmt::Debug for Convergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for a in self.carrier.nonempty_subsets() {
            m.entry(&self.carrier.format(a), &self.carrier.format(self.lim(a)));
        }
        m.finish()
    }
}

impl Convergence {
    /// Check a candidate table (indexed by subset bits, `None` for missing
    /// entries) and report every violated axiom instance.
    pub fn validate(carrier: Arc<Carrier>, table: &[Option<Subset>]) -> Result<Self> {
        let mut errs = Vec::new();
        let len = carrier.powerset_len();
        let full = carrier.full();
        let mut lim = vec![Subset::EMPTY; len];
        for a in carrier.nonempty_subsets() {
            match table.get(a.index()).copied().flatten() {
                None => errs.push(AxiomViolation::Missing { set: carrier.format(a) }),
                Some(l) if !l.is_subset_of(full) => errs.push(AxiomViolation::OutOfRange { set: carrier.format(a) }),
                Some(l) => lim[a.index()] = l,
            }
        }
        if !errs.is_empty() {
            return Err(Error::Axioms(errs));
        }
        Self::check_axioms(carrier, lim)
    }

    pub fn from_fn(carrier: Arc<Carrier>, mut f: impl FnMut(Subset) -> Subset) -> Result<Self> {
        let mut lim = vec![Subset::EMPTY; carrier.powerset_len()];
        for a in carrier.nonempty_subsets() {
            lim[a.index()] = f(a).intersection(carrier.full());
        }
        Self::check_axioms(carrier, lim)
    }

    fn check_axioms(carrier: Arc<Carrier>, lim: Vec<Subset>) -> Result<Self> {
        let mut errs = Vec::new();
        for x in 0..carrier.size() {
            if !lim[1 << x].contains(x) {
                errs.push(AxiomViolation::Centered {
                    point: carrier.label(x).to_string(),
                });
            }
        }
        // checking covering pairs A ⊂ A ∪ {p} suffices by transitivity
        for a in carrier.nonempty_subsets() {
            for p in carrier.full().difference(a).points() {
                let b = a.union(Subset::singleton(p));
                let extra = lim[b.index()].difference(lim[a.index()]);
                for x in extra.points() {
                    errs.push(AxiomViolation::Isotone {
                        smaller: carrier.format(a),
                        larger: carrier.format(b),
                        point: carrier.label(x).to_string(),
                    });
                }
            }
        }
        if errs.is_empty() {
            Ok(Convergence { carrier, lim })
        } else {
            Err(Error::Axioms(errs))
        }
    }

    /// Build from a table already known to satisfy both axioms.
    pub(crate) fn from_table_unchecked(carrier: Arc<Carrier>, lim: Vec<Subset>) -> Self {
        debug_assert!(Self::check_axioms(carrier.clone(), lim.clone()).is_ok());
        Convergence { carrier, lim }
    }

    /// `lim ↑A = {A}` for singletons, `∅` otherwise.
    pub fn discrete(carrier: Arc<Carrier>) -> Self {
        let lim = carrier
            .subsets()
            .map(|a| if a.len() == 1 { a } else { Subset::EMPTY })
            .collect();
        Convergence { carrier, lim }
    }

    /// Every filter converges to every point.
    pub fn indiscrete(carrier: Arc<Carrier>) -> Self {
        let full = carrier.full();
        let lim = carrier.subsets().map(|a| if a.is_empty() { a } else { full }).collect();
        Convergence { carrier, lim }
    }

    /// The pretopology with `lim ↑A = {x : A ⊆ V_x}`.
    pub fn from_vicinities(carrier: Arc<Carrier>, vicinities: &[Subset]) -> Result<Self> {
        if vicinities.len() != carrier.size() {
            return Err(Error::Document(format!(
                "{} vicinities for {} points",
                vicinities.len(),
                carrier.size()
            )));
        }
        for v in vicinities {
            carrier.subset(v.bits())?;
        }
        Self::from_fn(carrier, |a| {
            let bits = vicinities
                .iter()
                .enumerate()
                .filter(|(_, v)| a.is_subset_of(**v))
                .fold(0, |acc, (x, _)| acc | 1 << x);
            Subset::from_bits(bits)
        })
    }

    /// The topology of an open-set family: `x ∈ lim ↑A` iff every open set
    /// containing `x` includes `A`.
    pub fn from_open_sets(opens: &SetFamily) -> Self {
        let carrier = opens.carrier().clone();
        let n = carrier.size();
        let mut nbhd = vec![carrier.full(); n];
        for &o in opens.members() {
            for x in o.points() {
                nbhd[x] = nbhd[x].intersection(o);
            }
        }
        Self::from_vicinities(carrier, &nbhd).expect("neighborhood kernels contain their point")
    }

    /// The Sierpiński space on points `0, 1` with opens `∅, {0}, {0,1}`.
    pub fn sierpinski() -> Self {
        let c = Carrier::new(["0", "1"]).expect("two labels");
        let opens =
            SetFamily::new(c.clone(), [Subset::EMPTY, Subset::singleton(0), c.full()]).expect("subsets of the carrier");
        Self::from_open_sets(&opens)
    }

    /// The pretopology on `{a,b,c}` with vicinities `{a,b}`, `{b,c}`, `{c}`.
    pub fn p3() -> Self {
        let c = Carrier::with_size(3).expect("three points");
        let v = [0b011, 0b110, 0b100].map(Subset::from_bits);
        Self::from_vicinities(c, &v).expect("vicinities contain their point")
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    /// `lim ↑A`; the empty set maps to `∅`.
    #[inline]
    pub fn lim(&self, a: Subset) -> Subset {
        self.lim[a.index()]
    }

    pub fn table(&self) -> &[Subset] {
        &self.lim
    }

    pub fn limit(&self, f: &FiniteFilter) -> Result<Subset> {
        same_carrier(&self.carrier, f.carrier())?;
        if f.is_degenerate() {
            return Err(Error::DegenerateFilter);
        }
        Ok(self.lim(f.base()))
    }

    /// Union of all sets converging to `x`: the base of the vicinity filter.
    pub fn vicinity(&self, x: usize) -> Subset {
        self.carrier
            .nonempty_subsets()
            .filter(|&a| self.lim(a).contains(x))
            .fold(Subset::EMPTY, Subset::union)
    }

    pub fn vicinities(&self) -> Vec<Subset> {
        let mut v = vec![Subset::EMPTY; self.size()];
        for a in self.carrier.nonempty_subsets() {
            for x in self.lim(a).points() {
                v[x] = v[x].union(a);
            }
        }
        v
    }

    pub fn vicinity_filter(&self, x: usize) -> FiniteFilter {
        FiniteFilter::principal(self.carrier.clone(), self.vicinity(x)).expect("inside carrier")
    }

    /// Adherence of the principal filter `↑H`: `⋃ {lim ↑K : K ∩ H ≠ ∅}`,
    /// which by isotony is `⋃_{h∈H} lim ↑{h}`.
    #[inline]
    pub fn adh_set(&self, h: Subset) -> Subset {
        let mut out = Subset::EMPTY;
        let mut bits = h.bits();
        while bits != 0 {
            let p = bits.trailing_zeros();
            out = out.union(self.lim[1 << p]);
            bits &= bits - 1;
        }
        out
    }

    /// `⋃ {lim ↑H : H meets every member of fam}`.
    pub fn adherence(&self, fam: &SetFamily) -> Result<Subset> {
        same_carrier(&self.carrier, fam.carrier())?;
        Ok(self
            .carrier
            .nonempty_subsets()
            .filter(|h| fam.members().iter().all(|m| h.meets(*m)))
            .fold(Subset::EMPTY, |acc, h| acc.union(self.lim(h))))
    }

    /// `(adh fam_c)^c`.
    pub fn inherence(&self, fam: &SetFamily) -> Result<Subset> {
        let adh = self.adherence(&fam.complement_family())?;
        Ok(adh.complement(self.size()))
    }

    /// Every filter converging to a point of `a` contains a member of `fam`.
    pub fn is_cover(&self, fam: &SetFamily, a: Subset) -> Result<bool> {
        same_carrier(&self.carrier, fam.carrier())?;
        Ok(self
            .carrier
            .nonempty_subsets()
            .all(|h| !self.lim(h).meets(a) || fam.members().iter().any(|p| h.is_subset_of(*p))))
    }

    /// The three cover tests: direct, `A ⊆ inh fam`, `adh fam_c ∩ A = ∅`.
    pub fn cover_routes(&self, fam: &SetFamily, a: Subset) -> Result<[bool; 3]> {
        let direct = self.is_cover(fam, a)?;
        let by_inh = a.is_subset_of(self.inherence(fam)?);
        let by_adh = !self.adherence(&fam.complement_family())?.meets(a);
        Ok([direct, by_inh, by_adh])
    }

    /// Open sets, from the definition: `O ∩ lim ↑A ≠ ∅ ⟹ A ⊆ O`.
    pub fn is_open(&self, o: Subset) -> bool {
        self.carrier
            .nonempty_subsets()
            .all(|a| !o.meets(self.lim(a)) || a.is_subset_of(o))
    }

    pub fn open_sets(&self) -> SetFamily {
        let v = self.vicinities();
        let members = self
            .carrier
            .subsets()
            .filter(|o| o.points().all(|x| v[x].is_subset_of(*o)))
            .collect();
        SetFamily::from_sorted(self.carrier.clone(), members)
    }

    pub fn is_closed(&self, c: Subset) -> bool {
        self.adh_set(c).is_subset_of(c)
    }

    pub fn closed_sets(&self) -> Vec<Subset> {
        self.carrier.subsets().filter(|&c| self.is_closed(c)).collect()
    }

    /// Largest open subset.
    pub fn interior(&self, a: Subset) -> Subset {
        let v = self.vicinities();
        let mut u = a;
        loop {
            let next = Subset::from_bits(
                u.points()
                    .filter(|&x| v[x].is_subset_of(u))
                    .fold(0, |acc, x| acc | 1 << x),
            );
            if next == u {
                return u;
            }
            u = next;
        }
    }

    /// Least closed superset, by iterating the adherence of a set.
    pub fn closure_by_adherence(&self, a: Subset) -> Subset {
        let mut c = a;
        loop {
            let next = self.adh_set(c);
            if next == c {
                return c;
            }
            c = next;
        }
    }

    /// Least closed superset, as the complement of the largest open set
    /// inside the complement.
    pub fn closure_by_opens(&self, a: Subset) -> Subset {
        let n = self.size();
        self.interior(a.complement(n)).complement(n)
    }

    pub fn closure(&self, a: Subset) -> Subset {
        let c = self.closure_by_adherence(a);
        debug_assert_eq!(c, self.closure_by_opens(a));
        c
    }

    /// `↑(⋂ {O open : x ∈ O})`.
    pub fn neighborhood_filter(&self, x: usize) -> FiniteFilter {
        let base = self
            .open_sets()
            .members()
            .iter()
            .filter(|o| o.contains(x))
            .fold(self.carrier.full(), |acc, &o| acc.intersection(o));
        FiniteFilter::principal(self.carrier.clone(), base).expect("inside carrier")
    }

    /// `self ≥ other`: every limit of `self` is a limit of `other`.
    pub fn is_finer_than(&self, other: &Convergence) -> bool {
        self.carrier == other.carrier && self.lim.iter().zip(&other.lim).all(|(a, b)| a.is_subset_of(*b))
    }

    /// Pointwise intersection of limit tables.
    pub fn sup(convs: &[Convergence]) -> Result<Convergence> {
        Self::combine(convs, Subset::intersection)
    }

    /// Pointwise union of limit tables.
    pub fn inf(convs: &[Convergence]) -> Result<Convergence> {
        Self::combine(convs, Subset::union)
    }

    fn combine(convs: &[Convergence], op: fn(Subset, Subset) -> Subset) -> Result<Convergence> {
        let (first, rest) = convs.split_first().ok_or(Error::EmptyList)?;
        let mut lim = first.lim.clone();
        for c in rest {
            same_carrier(&first.carrier, &c.carrier)?;
            for (l, &m) in lim.iter_mut().zip(&c.lim) {
                *l = op(*l, m);
            }
        }
        Ok(Convergence::from_table_unchecked(first.carrier.clone(), lim))
    }

    /// Product convergence on `X × Y`, point `(x, y)` at index `x·|Y| + y`,
    /// labelled `x:y`.
    pub fn product(&self, other: &Convergence) -> Result<Convergence> {
        let (n, m) = (self.size(), other.size());
        if n * m > MAX_POINTS {
            return Err(Error::CapExceeded {
                size: n * m,
                cap: MAX_POINTS,
            });
        }
        let labels =
            (0..n).flat_map(|x| (0..m).map(move |y| format!("{}:{}", self.carrier.label(x), other.carrier.label(y))));
        let carrier = Carrier::new(labels.collect::<Vec<_>>())?;
        let mut lim = vec![Subset::EMPTY; carrier.powerset_len()];
        for c in carrier.nonempty_subsets() {
            let (mut p1, mut p2) = (0u32, 0u32);
            for i in c.points() {
                p1 |= 1 << (i / m);
                p2 |= 1 << (i % m);
            }
            let l1 = self.lim(Subset::from_bits(p1));
            let l2 = other.lim(Subset::from_bits(p2));
            let mut out = 0u32;
            for x in l1.points() {
                out |= l2.bits() << (x * m);
            }
            lim[c.index()] = Subset::from_bits(out);
        }
        Ok(Convergence::from_table_unchecked(carrier, lim))
    }

    /// Every limit set has at most one point.
    pub fn is_hausdorff(&self) -> bool {
        self.lim.iter().all(|l| l.len() <= 1)
    }

    /// The same table on a relabelled carrier.
    pub fn relabel(&self, carrier: Arc<Carrier>) -> Result<Convergence> {
        if carrier.size() != self.size() {
            return Err(Error::CarrierMismatch);
        }
        Ok(Convergence {
            carrier,
            lim: self.lim.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &Arc<Carrier>, labels: &[&str]) -> Subset {
        c.subset_of(labels.iter()).unwrap()
    }

    #[test]
    fn p3_limits() {
        let p = Convergence::p3();
        let c = p.carrier().clone();
        assert_eq!(p.lim(s(&c, &["c"])), s(&c, &["b", "c"]));
        assert_eq!(p.lim(s(&c, &["a", "c"])), Subset::EMPTY);
        for x in 0..3 {
            assert!(p.lim(Subset::singleton(x)).contains(x));
        }
    }

    #[test]
    fn validate_reports_centered_by_label() {
        let c = Carrier::with_size(2).unwrap();
        let table = vec![None, Some(Subset::singleton(1)), Some(c.full()), Some(Subset::EMPTY)];
        let err = Convergence::validate(c.clone(), &table).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("centered axiom violated at point a"), "{msg}");
        let table = vec![None, Some(Subset::singleton(0)), None, Some(Subset::EMPTY)];
        assert!(Convergence::validate(c, &table)
            .unwrap_err()
            .to_string()
            .contains("missing"));
    }

    #[test]
    fn validate_reports_isotone() {
        let c = Carrier::with_size(2).unwrap();
        let table = vec![
            None,
            Some(Subset::singleton(0)),
            Some(Subset::singleton(1)),
            Some(c.full()),
        ];
        let err = Convergence::validate(c, &table).unwrap_err();
        assert!(err.to_string().contains("isotone"));
    }

    #[test]
    fn discrete_validates() {
        let c = Carrier::with_size(3).unwrap();
        let d = Convergence::discrete(c.clone());
        let table: Vec<Option<Subset>> = d.table().iter().map(|&l| Some(l)).collect();
        assert_eq!(Convergence::validate(c, &table).unwrap(), d);
    }

    #[test]
    fn p3_open_and_closed() {
        let p = Convergence::p3();
        let c = p.carrier().clone();
        let expected = vec![Subset::EMPTY, s(&c, &["c"]), s(&c, &["b", "c"]), c.full()];
        let mut got = p.open_sets().members().to_vec();
        got.sort_by_key(|o| (o.len(), o.bits()));
        assert_eq!(got, expected);
        for o in c.subsets() {
            assert_eq!(p.is_open(o), p.open_sets().contains(o));
        }
        assert_eq!(p.closure(s(&c, &["c"])), c.full());
        assert_eq!(p.closure(Subset::EMPTY), Subset::EMPTY);
    }

    #[test]
    fn p3_adherences() {
        let p = Convergence::p3();
        let c = p.carrier().clone();
        let fam = |sets: &[&[&str]]| SetFamily::new(c.clone(), sets.iter().map(|x| s(&c, x))).unwrap();
        assert_eq!(p.adherence(&fam(&[&["c"]])).unwrap(), s(&c, &["b", "c"]));
        assert_eq!(p.adherence(&fam(&[&["b", "c"]])).unwrap(), c.full());
        assert_eq!(p.adherence(&fam(&[&["a"]])).unwrap(), s(&c, &["a"]));
        assert_eq!(p.inherence(&fam(&[&["b", "c"]])).unwrap(), s(&c, &["b", "c"]));
        assert_eq!(p.inherence(&fam(&[&["a", "b", "c"]])).unwrap(), c.full());
        assert!(p.is_cover(&fam(&[&["b", "c"]]), s(&c, &["b", "c"])).unwrap());
        for a in c.subsets() {
            assert_eq!(p.adh_set(a), p.adherence(&SetFamily::single(c.clone(), a)).unwrap());
        }
    }

    #[test]
    fn p3_filters() {
        let p = Convergence::p3();
        let c = p.carrier().clone();
        assert_eq!(p.vicinity_filter(0).base(), s(&c, &["a", "b"]));
        assert_eq!(p.neighborhood_filter(0).base(), c.full());
        let d = Convergence::discrete(c.clone());
        for x in 0..3 {
            assert_eq!(d.vicinity_filter(x).base(), Subset::singleton(x));
            assert_eq!(d.neighborhood_filter(x).base(), Subset::singleton(x));
        }
    }

    #[test]
    fn sierpinski_opens() {
        let s = Convergence::sierpinski();
        assert!(s.is_open(Subset::singleton(0)));
        assert!(!s.is_open(Subset::singleton(1)));
        assert_eq!(s.lim(Subset::singleton(0)), s.carrier().full());
    }

    #[test]
    fn product_of_discretes_is_discrete() {
        let a = Convergence::discrete(Carrier::with_size(2).unwrap());
        let b = Convergence::discrete(Carrier::with_size(3).unwrap());
        let p = a.product(&b).unwrap();
        assert_eq!(p, Convergence::discrete(p.carrier().clone()));
        assert_eq!(p.carrier().label(4), "b:b");
        let pt = Convergence::discrete(Carrier::with_size(1).unwrap());
        let p3 = Convergence::p3();
        let q = p3.product(&pt).unwrap();
        assert_eq!(q.table(), p3.table());
        assert!(a
            .product(&Convergence::discrete(Carrier::with_size(9).unwrap()))
            .is_err());
    }

    #[test]
    fn sup_and_inf_of_singletons() {
        let p = Convergence::p3();
        assert_eq!(Convergence::sup(&[p.clone()]).unwrap(), p);
        assert_eq!(Convergence::inf(&[p.clone()]).unwrap(), p);
        assert!(matches!(Convergence::sup(&[]), Err(Error::EmptyList)));
        let d = Convergence::discrete(p.carrier().clone());
        let s = Convergence::sup(&[d.clone(), p.clone()]).unwrap();
        assert_eq!(s, d);
        assert!(d.is_finer_than(&p) && !p.is_finer_than(&d));
    }

    #[test]
    fn from_open_sets_round_trip() {
        let s = Convergence::sierpinski();
        assert_eq!(Convergence::from_open_sets(&s.open_sets()), s);
    }
}
