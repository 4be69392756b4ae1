//! Adherence-determined reflectors and the finite coreflectors.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::compact;
use crate::convergence::Convergence;
use crate::error::{Error, Result};
use crate::family::{CarrierMap, Subset, MAX_POINTS};

/// A class of filters, given by the bases of its (principal) members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FilterClass {
    /// Principal filters of closed sets of the argument convergence.
    ClosedPrincipal,
    Principal,
    CountablyBased,
    All,
}

impl FilterClass {
    pub const ALL: [FilterClass; 4] = [
        FilterClass::ClosedPrincipal,
        FilterClass::Principal,
        FilterClass::CountablyBased,
        FilterClass::All,
    ];

    /// Classes preserved by images and preimages of maps.
    pub const TRANSFERABLE: [FilterClass; 3] = [FilterClass::Principal, FilterClass::CountablyBased, FilterClass::All];

    pub fn tag(self) -> &'static str {
        match self {
            FilterClass::ClosedPrincipal => "F0_CLOSED",
            FilterClass::Principal => "F0",
            FilterClass::CountablyBased => "F1",
            FilterClass::All => "F",
        }
    }

    /// Bases of the non-degenerate class filters on the carrier of `theta`,
    /// in increasing bit order. Only `ClosedPrincipal` looks at `theta`.
    pub fn bases(self, theta: &Convergence) -> Vec<Subset> {
        let n = theta.size();
        match self {
            FilterClass::ClosedPrincipal => theta
                .carrier()
                .nonempty_subsets()
                .filter(|&h| theta.is_closed(h))
                .collect(),
            FilterClass::Principal => cached(&PRINCIPAL, n, principal_bases),
            FilterClass::CountablyBased => cached(&COUNTABLE, n, chain_bases),
            FilterClass::All => cached(&ULTRA, n, ultrafilter_meet_bases),
        }
    }
}

impl fmt::Display for FilterClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FilterClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F0_CLOSED" | "closed" => Ok(FilterClass::ClosedPrincipal),
            "F0" => Ok(FilterClass::Principal),
            "F1" => Ok(FilterClass::CountablyBased),
            "F" | "F_ALL" => Ok(FilterClass::All),
            _ => Err(Error::Document(format!("unknown filter class {s:?}"))),
        }
    }
}

type BaseCache = [OnceLock<Vec<Subset>>; MAX_POINTS + 1];

static PRINCIPAL: BaseCache = [const { OnceLock::new() }; MAX_POINTS + 1];
static COUNTABLE: BaseCache = [const { OnceLock::new() }; MAX_POINTS + 1];
static ULTRA: BaseCache = [const { OnceLock::new() }; MAX_POINTS + 1];

fn cached(cache: &'static BaseCache, n: usize, build: fn(usize) -> Vec<Subset>) -> Vec<Subset> {
    cache[n].get_or_init(|| build(n)).clone()
}

fn principal_bases(n: usize) -> Vec<Subset> {
    (1..1u32 << n).map(Subset::from_bits).collect()
}

/// Filters generated by decreasing chains `A_0 ⊇ A_1 ⊇ …`; the generated
/// filter is based at the last link. Chains drop one point at a time from
/// the whole carrier, so every nonempty set ends some chain.
fn chain_bases(n: usize) -> Vec<Subset> {
    let full = Subset::full(n);
    let mut seen = vec![false; 1 << n];
    for end in (1..1u32 << n).map(Subset::from_bits) {
        let mut link = full;
        let mut chain = vec![link];
        for p in full.difference(end).points() {
            link = link.difference(Subset::singleton(p));
            chain.push(link);
        }
        let base = chain.iter().fold(full, |acc, &c| acc.intersection(c));
        seen[base.index()] = true;
    }
    bases_from_flags(&seen)
}

/// Every filter is the meet of the ultrafilters finer than it; on a finite
/// carrier these are point filters, so each nonempty set of points yields
/// one filter.
fn ultrafilter_meet_bases(n: usize) -> Vec<Subset> {
    let mut seen = vec![false; 1 << n];
    for choice in 1u32..1 << n {
        let base = (0..n)
            .filter(|p| choice >> p & 1 == 1)
            .map(Subset::singleton)
            .fold(Subset::EMPTY, Subset::union);
        seen[base.index()] = true;
    }
    bases_from_flags(&seen)
}

fn bases_from_flags(seen: &[bool]) -> Vec<Subset> {
    seen.iter()
        .enumerate()
        .filter(|(i, &s)| s && *i != 0)
        .map(|(i, _)| Subset::from_bits(i as u32))
        .collect()
}

/// `lim ↑F = ⋂ {adh_θ ↑H : H in class, H ∩ F ≠ ∅}` for a fixed list of
/// class bases.
pub fn reflect_with(theta: &Convergence, class_bases: &[Subset]) -> Convergence {
    let n = theta.size();
    let full = theta.carrier().full();
    // per point: intersection of adherences of class filters containing it
    let mut through = vec![full; n];
    for &h in class_bases {
        let adh = theta.adh_set(h);
        for p in h.points() {
            through[p] = through[p].intersection(adh);
        }
    }
    let mut lim = vec![Subset::EMPTY; 1 << n];
    for f in 1..1usize << n {
        let low = f.trailing_zeros() as usize;
        let rest = f & (f - 1);
        lim[f] = if rest == 0 {
            through[low]
        } else {
            lim[rest].intersection(through[low])
        };
    }
    Convergence::from_table_unchecked(theta.carrier().clone(), lim)
}

/// The reflector adherence-determined by `class`. For closed principal
/// filters the class depends on the convergence, so the step is iterated to
/// a fixed point.
pub fn reflect(class: FilterClass, theta: &Convergence) -> Convergence {
    match class {
        FilterClass::ClosedPrincipal => {
            let mut cur = theta.clone();
            loop {
                let next = reflect_with(&cur, &class.bases(&cur));
                if next == cur {
                    return cur;
                }
                cur = next;
            }
        }
        _ => reflect_with(theta, &class.bases(theta)),
    }
}

/// The topology of the open sets of `theta`.
pub fn topologize(theta: &Convergence) -> Convergence {
    Convergence::from_open_sets(&theta.open_sets())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Functor {
    T,
    S0,
    S1,
    S,
    I,
    Seq,
    I1,
    K,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctorKind {
    Reflector,
    Coreflector,
    Identity,
}

impl Functor {
    pub const ALL: [Functor; 8] = [
        Functor::T,
        Functor::S0,
        Functor::S1,
        Functor::S,
        Functor::I,
        Functor::Seq,
        Functor::I1,
        Functor::K,
    ];
    pub const REFLECTORS: [Functor; 4] = [Functor::T, Functor::S0, Functor::S1, Functor::S];
    pub const COREFLECTORS: [Functor; 3] = [Functor::Seq, Functor::I1, Functor::K];

    pub fn name(self) -> &'static str {
        match self {
            Functor::T => "T",
            Functor::S0 => "S0",
            Functor::S1 => "S1",
            Functor::S => "S",
            Functor::I => "I",
            Functor::Seq => "Seq",
            Functor::I1 => "I1",
            Functor::K => "K",
        }
    }

    pub fn kind(self) -> FunctorKind {
        match self {
            Functor::T | Functor::S0 | Functor::S1 | Functor::S => FunctorKind::Reflector,
            Functor::Seq | Functor::I1 | Functor::K => FunctorKind::Coreflector,
            Functor::I => FunctorKind::Identity,
        }
    }

    /// The filter class a reflector is adherence-determined by.
    pub fn class(self) -> Option<FilterClass> {
        match self {
            Functor::T => Some(FilterClass::ClosedPrincipal),
            Functor::S0 => Some(FilterClass::Principal),
            Functor::S1 => Some(FilterClass::CountablyBased),
            Functor::S => Some(FilterClass::All),
            _ => None,
        }
    }

    pub fn apply(self, theta: &Convergence) -> Convergence {
        match self {
            Functor::I => theta.clone(),
            Functor::Seq | Functor::I1 | Functor::K => {
                apply_coreflector(self, theta).expect("coreflector tags are accepted")
            }
            _ => reflect(self.class().expect("reflector"), theta),
        }
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Functor::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Document(format!("unknown functor {s:?}")))
    }
}

/// Sequential filters `(B/A)₀` on a finite carrier: with `B` finite every
/// subset of `B` is cofinite in it, so the generator is `↑A`. Returns the
/// bases `A` over all pairs `A ⊆ B`, `A ≠ ∅`.
fn sequential_bases(n: usize) -> Vec<Subset> {
    let full = Subset::full(n);
    let mut seen = vec![false; 1 << n];
    for b in full.subsets() {
        for a in b.subsets().filter(|a| !a.is_empty()) {
            seen[a.index()] = true;
        }
    }
    bases_from_flags(&seen)
}

/// `x ∈ lim_E ↑F` iff some class filter `↑G ≤ ↑F` (i.e. `G ⊇ F`) has
/// `x ∈ lim ↑G`, optionally restricted to filters containing a compactoid set.
pub fn apply_coreflector(tag: Functor, theta: &Convergence) -> Result<Convergence> {
    let n = theta.size();
    let bases = match tag {
        Functor::Seq => sequential_bases(n),
        Functor::I1 => FilterClass::CountablyBased.bases(theta),
        Functor::K => FilterClass::Principal.bases(theta),
        other => {
            return Err(Error::WrongFunctorKind {
                functor: other.name().into(),
                expected: "coreflector",
            })
        }
    };
    let mut lim = vec![Subset::EMPTY; 1 << n];
    for f in theta.carrier().nonempty_subsets() {
        let mut out = Subset::EMPTY;
        for &g in bases.iter().filter(|g| f.is_subset_of(**g)) {
            out = out.union(theta.lim(g));
        }
        if tag == Functor::K && !f.subsets().any(|k| compact::is_compactoid_set(theta, k)) {
            out = Subset::EMPTY;
        }
        lim[f.index()] = out;
    }
    Ok(Convergence::from_table_unchecked(theta.carrier().clone(), lim))
}

pub fn is_topology(theta: &Convergence) -> bool {
    reflect(FilterClass::ClosedPrincipal, theta) == *theta
}

pub fn is_pretopology(theta: &Convergence) -> bool {
    reflect(FilterClass::Principal, theta) == *theta
}

pub fn is_paratopology(theta: &Convergence) -> bool {
    reflect(FilterClass::CountablyBased, theta) == *theta
}

/// Fixed point of `S`, cross-checked with `lim ↑F = ⋂_{U ∈ βF} lim U`.
pub fn is_pseudotopology(theta: &Convergence) -> bool {
    let fixed = reflect(FilterClass::All, theta) == *theta;
    let by_ultra = theta.carrier().nonempty_subsets().all(|f| {
        let meet = f.points().fold(theta.carrier().full(), |acc, p| {
            acc.intersection(theta.lim(Subset::singleton(p)))
        });
        meet == theta.lim(f)
    });
    debug_assert_eq!(fixed, by_ultra);
    fixed && by_ultra
}

/// Whether `f` is continuous from `xi` to `tau`: `f(lim ↑A) ⊆ lim ↑f(A)`.
pub(crate) fn continuous_raw(f: &CarrierMap, xi: &Convergence, tau: &Convergence) -> bool {
    xi.carrier()
        .nonempty_subsets()
        .all(|a| f.image(xi.lim(a)).is_subset_of(tau.lim(f.image(a))))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawCount {
    pub instances: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub functor: String,
    /// `contractive` for reflectors, `expansive` for coreflectors.
    pub direction: LawCount,
    pub idempotent: LawCount,
    pub isotone: LawCount,
    pub functorial: LawCount,
    pub first_failure: Option<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.direction.failures + self.idempotent.failures + self.isotone.failures + self.functorial.failures == 0
    }

    pub fn instances(&self) -> usize {
        self.direction.instances + self.idempotent.instances + self.isotone.instances + self.functorial.instances
    }
}

/// Check the functor laws on `convs` and on the index pairs `pairs`; the
/// functorial law ranges over all self-maps of the (shared) carrier.
pub fn check_functor_laws(functor: Functor, convs: &[Convergence], pairs: &[(usize, usize)]) -> LawReport {
    let images: Vec<Convergence> = convs.iter().map(|c| functor.apply(c)).collect();
    let mut report = LawReport {
        functor: functor.name().into(),
        direction: LawCount::default(),
        idempotent: LawCount::default(),
        isotone: LawCount::default(),
        functorial: LawCount::default(),
        first_failure: None,
    };
    let mut first: Option<String> = None;
    let mut note = |ok: bool, count: &mut LawCount, what: String| {
        count.instances += 1;
        if !ok {
            count.failures += 1;
            first.get_or_insert(what);
        }
    };
    for (c, h) in convs.iter().zip(&images) {
        let ok = match functor.kind() {
            FunctorKind::Reflector => c.is_finer_than(h),
            FunctorKind::Coreflector => h.is_finer_than(c),
            FunctorKind::Identity => h == c,
        };
        note(ok, &mut report.direction, format!("direction law at {c:?}"));
        let again = functor.apply(h);
        note(&again == h, &mut report.idempotent, format!("idempotence at {c:?}"));
    }
    let mut maps_cache: Vec<(usize, Vec<CarrierMap>)> = Vec::new();
    for &(i, j) in pairs {
        let (zeta, xi) = (&convs[i], &convs[j]);
        if zeta.is_finer_than(xi) {
            note(
                images[i].is_finer_than(&images[j]),
                &mut report.isotone,
                format!("isotony at {zeta:?} ≥ {xi:?}"),
            );
        } else {
            report.isotone.instances += 1;
        }
        if zeta.carrier() != xi.carrier() {
            continue;
        }
        let n = zeta.size();
        if !maps_cache.iter().any(|(m, _)| *m == n) {
            maps_cache.push((n, all_self_maps(zeta)));
        }
        let maps = &maps_cache.iter().find(|(m, _)| *m == n).expect("cached").1;
        for f in maps {
            let ok = !continuous_raw(f, zeta, xi) || continuous_raw(f, &images[i], &images[j]);
            note(
                ok,
                &mut report.functorial,
                format!("functoriality at {f:?}: {zeta:?} → {xi:?}"),
            );
        }
    }
    report.first_failure = first;
    report
}

fn all_self_maps(theta: &Convergence) -> Vec<CarrierMap> {
    let n = theta.size();
    let c = theta.carrier();
    (0..n.pow(n as u32))
        .map(|code| {
            let images = (0..n).map(|x| code / n.pow(x as u32) % n).collect();
            CarrierMap::new(c.clone(), c.clone(), images).expect("total map")
        })
        .collect()
}
