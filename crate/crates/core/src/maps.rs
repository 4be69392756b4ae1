//! Continuity, initial and final convergences, and the classification of
//! surjections into quotient-like and perfect-like classes.

use serde::Serialize;

use crate::convergence::Convergence;
use crate::error::{Error, Result};
use crate::family::{same_carrier, CarrierMap, FiniteRelation, SetFamily, Subset};
use crate::functor::{continuous_raw, reflect, FilterClass, Functor, FunctorKind};

/// `x ∈ lim ↑A` iff `f(x) ∈ lim_τ ↑f(A)`. Defined for any map.
pub fn initial_convergence(f: &CarrierMap, tau: &Convergence) -> Result<Convergence> {
    same_carrier(f.target(), tau.carrier())?;
    let src = f.source();
    let lim = src
        .subsets()
        .map(|a| {
            if a.is_empty() {
                return a;
            }
            let l = tau.lim(f.image(a));
            f.preimage(l)
        })
        .collect();
    Ok(Convergence::from_table_unchecked(src.clone(), lim))
}

/// The finest convergence on the target making `f` continuous:
/// `y ∈ lim ↑B` iff `y ∈ f(lim_ξ ↑A)` for some `A` with `f(A) = B`.
pub fn final_convergence(f: &CarrierMap, xi: &Convergence) -> Result<Convergence> {
    same_carrier(f.source(), xi.carrier())?;
    if !f.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let tgt = f.target();
    let mut lim = vec![Subset::EMPTY; tgt.powerset_len()];
    for a in xi.carrier().nonempty_subsets() {
        let b = f.image(a);
        lim[b.index()] = lim[b.index()].union(f.image(xi.lim(a)));
    }
    Ok(Convergence::from_table_unchecked(tgt.clone(), lim))
}

/// A map together with convergences on its source and target.
#[derive(Clone, Debug)]
pub struct MapContext {
    pub f: CarrierMap,
    pub xi: Convergence,
    pub tau: Convergence,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ClassificationReport {
    pub continuous: bool,
    pub open: bool,
    pub almost_open: bool,
    pub biquotient: bool,
    pub countably_biquotient: bool,
    pub hereditarily_quotient: bool,
    pub quotient: bool,
    pub perfect: bool,
    pub countably_perfect: bool,
    pub adherent: bool,
    pub closed: bool,
    pub graph_closed: bool,
}

impl ClassificationReport {
    pub const FLAGS: [&'static str; 12] = [
        "continuous",
        "open",
        "almost_open",
        "biquotient",
        "countably_biquotient",
        "hereditarily_quotient",
        "quotient",
        "perfect",
        "countably_perfect",
        "adherent",
        "closed",
        "graph_closed",
    ];

    /// Implications every report must satisfy, as `(stronger, weaker)`.
    pub const IMPLICATIONS: [(&'static str, &'static str); 12] = [
        ("open", "almost_open"),
        ("almost_open", "biquotient"),
        ("biquotient", "countably_biquotient"),
        ("countably_biquotient", "hereditarily_quotient"),
        ("hereditarily_quotient", "quotient"),
        ("perfect", "countably_perfect"),
        ("countably_perfect", "adherent"),
        ("adherent", "closed"),
        ("perfect", "biquotient"),
        ("countably_perfect", "countably_biquotient"),
        ("adherent", "hereditarily_quotient"),
        ("closed", "quotient"),
    ];

    pub fn get(&self, flag: &str) -> Option<bool> {
        Some(match flag {
            "continuous" => self.continuous,
            "open" => self.open,
            "almost_open" => self.almost_open,
            "biquotient" => self.biquotient,
            "countably_biquotient" => self.countably_biquotient,
            "hereditarily_quotient" => self.hereditarily_quotient,
            "quotient" => self.quotient,
            "perfect" => self.perfect,
            "countably_perfect" => self.countably_perfect,
            "adherent" => self.adherent,
            "closed" => self.closed,
            "graph_closed" => self.graph_closed,
            _ => return None,
        })
    }

    /// First implication that fails, if any.
    pub fn broken_implication(&self) -> Option<(&'static str, &'static str)> {
        Self::IMPLICATIONS
            .into_iter()
            .find(|(a, b)| self.get(a) == Some(true) && self.get(b) == Some(false))
    }

    pub fn quotient_flag(class: FilterClass) -> &'static str {
        match class {
            FilterClass::ClosedPrincipal => "quotient",
            FilterClass::Principal => "hereditarily_quotient",
            FilterClass::CountablyBased => "countably_biquotient",
            FilterClass::All => "biquotient",
        }
    }

    pub fn perfect_flag(class: FilterClass) -> &'static str {
        match class {
            FilterClass::ClosedPrincipal => "closed",
            FilterClass::Principal => "adherent",
            FilterClass::CountablyBased => "countably_perfect",
            FilterClass::All => "perfect",
        }
    }
}

/// A failing instance behind a false flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub flag: String,
    pub detail: String,
}

/// `{P : P ⊆ X ∖ G}`, the family whose complement family is `↑G`.
fn dual_ideal(carrier: &std::sync::Arc<crate::family::Carrier>, g: Subset) -> SetFamily {
    let outside = g.complement(carrier.size());
    SetFamily::new(carrier.clone(), outside.subsets()).expect("inside carrier")
}

impl MapContext {
    pub fn new(f: CarrierMap, xi: Convergence, tau: Convergence) -> Result<Self> {
        same_carrier(f.source(), xi.carrier())?;
        same_carrier(f.target(), tau.carrier())?;
        Ok(MapContext { f, xi, tau })
    }

    fn surjective(&self) -> Result<()> {
        if self.f.is_surjective() {
            Ok(())
        } else {
            Err(Error::NotSurjective)
        }
    }

    fn fmt_x(&self, s: Subset) -> String {
        self.xi.carrier().format(s)
    }

    fn fmt_y(&self, s: Subset) -> String {
        self.tau.carrier().format(s)
    }

    pub fn final_convergence(&self) -> Result<Convergence> {
        final_convergence(&self.f, &self.xi)
    }

    pub fn initial_convergence(&self) -> Convergence {
        initial_convergence(&self.f, &self.tau).expect("context carriers match")
    }

    /// `f(lim_ξ ↑A) ⊆ lim_τ ↑f(A)` for every nonempty `A`.
    pub fn continuous(&self) -> bool {
        continuous_raw(&self.f, &self.xi, &self.tau)
    }

    /// Continuity as `ξ ≥ f⁻τ`.
    pub fn continuous_by_initial(&self) -> bool {
        self.xi.is_finer_than(&self.initial_convergence())
    }

    /// Target-side class bases; closedness refers to `fξ`.
    fn target_class(&self, class: FilterClass, fxi: &Convergence) -> Vec<Subset> {
        match class {
            FilterClass::ClosedPrincipal => class.bases(fxi),
            _ => class.bases(&self.tau),
        }
    }

    /// Source-side class bases; closedness refers to `ξ`.
    fn source_class(&self, class: FilterClass) -> Vec<Subset> {
        class.bases(&self.xi)
    }

    /// `y ∈ adh_τ ↑H ⟹ f⁻(y) ∩ adh_ξ ↑f⁻(H) ≠ ∅` for class `H`.
    pub fn quotient_by_adherence(&self, class: FilterClass) -> Result<bool> {
        Ok(self.quotient_witness(class)?.is_none())
    }

    fn quotient_witness(&self, class: FilterClass) -> Result<Option<String>> {
        self.surjective()?;
        let fxi = self.final_convergence()?;
        for h in self.target_class(class, &fxi) {
            let pre = self.f.preimage(h);
            let adh_src = self.xi.adh_set(pre);
            for y in self.tau.adh_set(h).points() {
                if !self.f.fiber(y).meets(adh_src) {
                    return Ok(Some(format!(
                        "{} adheres to {} in the target but no point of its fiber adheres to {}",
                        self.tau.carrier().label(y),
                        self.fmt_y(h),
                        self.fmt_x(pre)
                    )));
                }
            }
        }
        Ok(None)
    }

    /// The inclusion `f⁻(adh_τ ↑H) ⊆ adh_ξ ↑f⁻(H)` read literally; it asks
    /// every point of the fiber to adhere and is strictly stronger than
    /// [`Self::quotient_by_adherence`].
    pub fn quotient_literal(&self, class: FilterClass) -> Result<bool> {
        self.surjective()?;
        let fxi = self.final_convergence()?;
        Ok(self.target_class(class, &fxi).into_iter().all(|h| {
            self.f
                .preimage(self.tau.adh_set(h))
                .is_subset_of(self.xi.adh_set(self.f.preimage(h)))
        }))
    }

    /// `τ ≥ H(fξ)`.
    pub fn quotient_by_reflector(&self, class: FilterClass) -> Result<bool> {
        let fxi = self.final_convergence()?;
        Ok(self.tau.is_finer_than(&reflect(class, &fxi)))
    }

    /// Images of covers: `f⁻(y) ⊆ inh_ξ Q ⟹ y ∈ inh_τ f[Q]` for every `Q`
    /// whose complement family is a class filter.
    pub fn quotient_by_covers(&self, class: FilterClass) -> Result<bool> {
        self.surjective()?;
        let src = self.xi.carrier();
        let sources: Vec<Subset> = match class {
            FilterClass::ClosedPrincipal => {
                let fxi = self.final_convergence()?;
                class.bases(&fxi).into_iter().map(|h| self.f.preimage(h)).collect()
            }
            _ => self.source_class(class),
        };
        for g in sources {
            let q = dual_ideal(src, g);
            let inh_src = self.xi.inherence(&q)?;
            let inh_tgt = self.tau.inherence(&q.image(self.f.relation())?)?;
            for y in 0..self.tau.size() {
                if self.f.fiber(y).is_subset_of(inh_src) && !inh_tgt.contains(y) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The three quotient tests; they must agree.
    pub fn is_quotient_like(&self, class: FilterClass) -> Result<bool> {
        let a = self.quotient_by_adherence(class)?;
        let b = self.quotient_by_reflector(class)?;
        let c = self.quotient_by_covers(class)?;
        if a != b || b != c {
            return Err(Error::Disagreement(format!(
                "{class}-quotient: adherence {a}, reflector {b}, covers {c} for {:?}",
                self.f
            )));
        }
        Ok(a)
    }

    /// `adh_τ ↑f(G) ⊆ f(adh_ξ ↑G)` for class `G`.
    pub fn perfect_by_adherence(&self, class: FilterClass) -> Result<bool> {
        Ok(self.perfect_witness(class)?.is_none())
    }

    fn perfect_witness(&self, class: FilterClass) -> Result<Option<String>> {
        self.surjective()?;
        for g in self.source_class(class) {
            let img = self.f.image(g);
            let lhs = self.tau.adh_set(img);
            let rhs = self.f.image(self.xi.adh_set(g));
            if let Some(y) = lhs.difference(rhs).points().next() {
                return Ok(Some(format!(
                    "{} adheres to {} but no point of its fiber adheres to {}",
                    self.tau.carrier().label(y),
                    self.fmt_y(img),
                    self.fmt_x(g)
                )));
            }
        }
        Ok(None)
    }

    /// Cover form with the small image `f^#(P) = {y : f⁻(y) ⊆ P}`:
    /// `f⁻(y) ⊆ inh_ξ Q ⟹ y ∈ inh_τ f^#[Q]` for every `Q` whose complement
    /// family is a class filter.
    pub fn perfect_by_covers(&self, class: FilterClass) -> Result<bool> {
        self.surjective()?;
        let src = self.xi.carrier();
        for g in self.source_class(class) {
            let q = dual_ideal(src, g);
            let inh_src = self.xi.inherence(&q)?;
            let small = SetFamily::new(
                self.tau.carrier().clone(),
                q.members().iter().map(|&p| self.f.small_image(p)),
            )?;
            let inh_tgt = self.tau.inherence(&small)?;
            for y in 0..self.tau.size() {
                if self.f.fiber(y).is_subset_of(inh_src) && !inh_tgt.contains(y) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Preimages of covers, read literally: `f⁻(y) ⊆ inh_ξ f⁻[P] ⟹
    /// y ∈ inh_τ P` for target families `P` with `P_c` a class filter.
    /// Only the sets `f⁻(H)` are probed, so this is implied by
    /// perfectness but does not characterize it.
    pub fn perfect_literal_covers(&self, class: FilterClass) -> Result<bool> {
        self.surjective()?;
        if class == FilterClass::ClosedPrincipal {
            return Err(Error::NotTransferable(class.tag().into()));
        }
        let tgt = self.tau.carrier();
        for h in class.bases(&self.tau) {
            let p = dual_ideal(tgt, h);
            let inh_src = self.xi.inherence(&p.preimage(self.f.relation())?)?;
            let inh_tgt = self.tau.inherence(&p)?;
            for y in 0..self.tau.size() {
                if self.f.fiber(y).is_subset_of(inh_src) && !inh_tgt.contains(y) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The two perfect tests; they must agree.
    pub fn is_perfect_like(&self, class: FilterClass) -> Result<bool> {
        let a = self.perfect_by_adherence(class)?;
        let b = self.perfect_by_covers(class)?;
        if a != b {
            return Err(Error::Disagreement(format!(
                "{class}-perfect: adherence {a}, covers {b} for {:?}",
                self.f
            )));
        }
        Ok(a)
    }

    /// `R[B] = ⋃ {lim_ξ ↑A : f(A) = B}` for every `B`.
    fn reachable(&self) -> Vec<Subset> {
        let mut reach = vec![Subset::EMPTY; self.tau.carrier().powerset_len()];
        for a in self.xi.carrier().nonempty_subsets() {
            let b = self.f.image(a);
            reach[b.index()] = reach[b.index()].union(self.xi.lim(a));
        }
        reach
    }

    /// Every point of the fiber of a limit `y` of `↑B` is a limit of some
    /// `↑A` with `f(A) = B`.
    pub fn is_open_map(&self) -> Result<bool> {
        self.surjective()?;
        let reach = self.reachable();
        Ok(self
            .tau
            .carrier()
            .nonempty_subsets()
            .all(|b| self.f.preimage(self.tau.lim(b)).is_subset_of(reach[b.index()])))
    }

    /// Some point of the fiber of each limit `y` of `↑B` is a limit of some
    /// `↑A` with `f(A) = B`.
    pub fn is_almost_open(&self) -> Result<bool> {
        self.surjective()?;
        let reach = self.reachable();
        let by_filters = self
            .tau
            .carrier()
            .nonempty_subsets()
            .all(|b| self.tau.lim(b).is_subset_of(self.f.image(reach[b.index()])));
        let by_final = self.tau.is_finer_than(&self.final_convergence()?);
        if by_filters != by_final {
            return Err(Error::Disagreement("almost open: filter form vs τ ≥ fξ".into()));
        }
        Ok(by_filters)
    }

    /// `f(O)` is open for every open `O`.
    pub fn maps_open_sets_to_open_sets(&self) -> bool {
        self.xi
            .open_sets()
            .members()
            .iter()
            .all(|&o| self.tau.is_open(self.f.image(o)))
    }

    /// `f(C)` is closed for every closed `C`.
    pub fn maps_closed_sets_to_closed_sets(&self) -> bool {
        self.xi
            .closed_sets()
            .into_iter()
            .all(|c| self.tau.is_closed(self.f.image(c)))
    }

    pub fn classify(&self) -> Result<ClassificationReport> {
        self.surjective()?;
        let q = |c| self.is_quotient_like(c);
        let p = |c| self.is_perfect_like(c);
        let report = ClassificationReport {
            continuous: self.continuous(),
            open: self.is_open_map()?,
            almost_open: self.is_almost_open()?,
            biquotient: q(FilterClass::All)?,
            countably_biquotient: q(FilterClass::CountablyBased)?,
            hereditarily_quotient: q(FilterClass::Principal)?,
            quotient: q(FilterClass::ClosedPrincipal)?,
            perfect: p(FilterClass::All)?,
            countably_perfect: p(FilterClass::CountablyBased)?,
            adherent: p(FilterClass::Principal)?,
            closed: p(FilterClass::ClosedPrincipal)?,
            graph_closed: graph_closed(self.f.relation(), &self.xi, &self.tau)?,
        };
        if let Some((a, b)) = report.broken_implication() {
            return Err(Error::Disagreement(format!("{a} holds but {b} fails for {:?}", self.f)));
        }
        Ok(report)
    }

    /// A failing instance for each false flag of the report.
    pub fn witnesses(&self, report: &ClassificationReport) -> Result<Vec<Witness>> {
        let mut out = Vec::new();
        let mut push = |flag: &str, detail: String| {
            out.push(Witness {
                flag: flag.into(),
                detail,
            })
        };
        if !report.continuous {
            let a = self
                .xi
                .carrier()
                .nonempty_subsets()
                .find(|&a| !self.f.image(self.xi.lim(a)).is_subset_of(self.tau.lim(self.f.image(a))))
                .expect("a discontinuity exists");
            push(
                "continuous",
                format!(
                    "f(lim {}) = {} is not inside lim {} = {}",
                    self.fmt_x(a),
                    self.fmt_y(self.f.image(self.xi.lim(a))),
                    self.fmt_y(self.f.image(a)),
                    self.fmt_y(self.tau.lim(self.f.image(a)))
                ),
            );
        }
        let reach = self.reachable();
        if !report.open || !report.almost_open {
            for b in self.tau.carrier().nonempty_subsets() {
                let missing = self.f.preimage(self.tau.lim(b)).difference(reach[b.index()]);
                if let Some(x) = missing.points().next() {
                    if !report.open {
                        push(
                            "open",
                            format!(
                                "{} lies over a limit of {} but no filter mapped onto it converges to {}",
                                self.xi.carrier().label(x),
                                self.fmt_y(b),
                                self.xi.carrier().label(x)
                            ),
                        );
                    }
                    break;
                }
            }
            for b in self.tau.carrier().nonempty_subsets() {
                let bad = self.tau.lim(b).difference(self.f.image(reach[b.index()]));
                if let Some(y) = bad.points().next() {
                    if !report.almost_open {
                        push(
                            "almost_open",
                            format!(
                                "{} is a limit of {} but of no image filter of that base",
                                self.tau.carrier().label(y),
                                self.fmt_y(b)
                            ),
                        );
                    }
                    break;
                }
            }
        }
        for class in FilterClass::ALL {
            let qf = ClassificationReport::quotient_flag(class);
            if report.get(qf) == Some(false) {
                if let Some(d) = self.quotient_witness(class)? {
                    push(qf, d);
                }
            }
            let pf = ClassificationReport::perfect_flag(class);
            if report.get(pf) == Some(false) {
                if let Some(d) = self.perfect_witness(class)? {
                    push(pf, d);
                }
            }
        }
        if !report.graph_closed {
            if let Some(d) = graph_closed_witness(self.f.relation(), &self.xi, &self.tau)? {
                push("graph_closed", d);
            }
        }
        Ok(out)
    }

    /// The three clauses of continuity in the subcategory of `class`:
    /// `f ∈ C(Jξ, Jτ)`, a preimage-side adherence inclusion and an
    /// image-side one. For closed classes the image side is the closure
    /// form `f(cl A) ⊆ cl f(A)` and the preimage side ranges over closed
    /// target sets.
    pub fn continuity_clauses(&self, class: FilterClass) -> [bool; 3] {
        let jxi = reflect(class, &self.xi);
        let jtau = reflect(class, &self.tau);
        let first = continuous_raw(&self.f, &jxi, &jtau);
        let (second, third) = match class {
            FilterClass::ClosedPrincipal => {
                let second = class.bases(&self.tau).into_iter().all(|h| {
                    self.xi
                        .adh_set(self.f.preimage(h))
                        .is_subset_of(self.f.preimage(self.tau.adh_set(h)))
                });
                let third = self.xi.carrier().nonempty_subsets().all(|a| {
                    self.f
                        .image(self.xi.closure(a))
                        .is_subset_of(self.tau.closure(self.f.image(a)))
                });
                (second, third)
            }
            _ => {
                let second = class.bases(&self.tau).into_iter().all(|h| {
                    self.xi
                        .adh_set(self.f.preimage(h))
                        .is_subset_of(self.f.preimage(self.tau.adh_set(h)))
                });
                let third = class.bases(&self.xi).into_iter().all(|g| {
                    self.f
                        .image(self.xi.adh_set(g))
                        .is_subset_of(self.tau.adh_set(self.f.image(g)))
                });
                (second, third)
            }
        };
        [first, second, third]
    }
}

/// `adh_σ ↑R(A) ⊆ R(w)` for every `A` with `w ∈ lim_θ ↑A`.
pub fn graph_closed_at(rel: &FiniteRelation, theta: &Convergence, sigma: &Convergence, w: usize) -> bool {
    let rw = rel.at(w);
    theta
        .carrier()
        .nonempty_subsets()
        .filter(|&a| theta.lim(a).contains(w))
        .all(|a| sigma.adh_set(rel.image(a)).is_subset_of(rw))
}

pub fn graph_closed(rel: &FiniteRelation, theta: &Convergence, sigma: &Convergence) -> Result<bool> {
    same_carrier(rel.source(), theta.carrier())?;
    same_carrier(rel.target(), sigma.carrier())?;
    Ok((0..theta.size()).all(|w| graph_closed_at(rel, theta, sigma, w)))
}

fn graph_closed_witness(rel: &FiniteRelation, theta: &Convergence, sigma: &Convergence) -> Result<Option<String>> {
    for w in 0..theta.size() {
        for a in theta.carrier().nonempty_subsets() {
            if theta.lim(a).contains(w) && !sigma.adh_set(rel.image(a)).is_subset_of(rel.at(w)) {
                return Ok(Some(format!(
                    "{} is a limit of {} but adh R{} = {} leaves R({}) = {}",
                    theta.carrier().label(w),
                    theta.carrier().format(a),
                    theta.carrier().format(a),
                    sigma.carrier().format(sigma.adh_set(rel.image(a))),
                    theta.carrier().label(w),
                    sigma.carrier().format(rel.at(w))
                )));
            }
        }
    }
    Ok(None)
}

/// The graph of `rel` is closed in the product convergence.
pub fn graph_closed_in_product(rel: &FiniteRelation, theta: &Convergence, sigma: &Convergence) -> Result<bool> {
    same_carrier(rel.source(), theta.carrier())?;
    same_carrier(rel.target(), sigma.carrier())?;
    let prod = theta.product(sigma)?;
    Ok(prod.is_closed(rel.graph_bits()))
}

fn check_je_args(j: Functor, e: Functor) -> Result<()> {
    if !matches!(j.kind(), FunctorKind::Reflector | FunctorKind::Identity) {
        return Err(Error::WrongFunctorKind {
            functor: j.name().into(),
            expected: "reflector",
        });
    }
    if e.kind() != FunctorKind::Coreflector {
        return Err(Error::WrongFunctorKind {
            functor: e.name().into(),
            expected: "coreflector",
        });
    }
    Ok(())
}

/// `ξ ≥ J(Eξ)`, cross-checked against the identity `Eξ → ξ` being
/// `J`-quotient (almost open for `J = I`).
pub fn is_je(xi: &Convergence, j: Functor, e: Functor) -> Result<bool> {
    check_je_args(j, e)?;
    let exi = e.apply(xi);
    let by_inequality = xi.is_finer_than(&j.apply(&exi));
    let id = CarrierMap::identity(xi.carrier().clone());
    let ctx = MapContext::new(id, exi, xi.clone())?;
    let by_quotient = match j.class() {
        Some(class) => ctx.is_quotient_like(class)?,
        None => ctx.is_almost_open()?,
    };
    if by_inequality != by_quotient {
        return Err(Error::Disagreement(format!(
            "{j}{e}: inequality {by_inequality}, identity quotient {by_quotient}"
        )));
    }
    Ok(by_inequality)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    /// `ξ` is `JE`, `f` is continuous and `J`-quotient.
    pub applicable: bool,
    pub target_je: bool,
}

impl PreservationReport {
    pub fn holds(&self) -> bool {
        !self.applicable || self.target_je
    }
}

pub fn check_preservation(ctx: &MapContext, j: Functor, e: Functor) -> Result<PreservationReport> {
    check_je_args(j, e)?;
    let j_quotient = match j.class() {
        Some(class) => ctx.is_quotient_like(class)?,
        None => ctx.is_almost_open()?,
    };
    let applicable = ctx.continuous() && j_quotient && is_je(&ctx.xi, j, e)?;
    Ok(PreservationReport {
        applicable,
        target_je: is_je(&ctx.tau, j, e)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Carrier;
    use crate::functor::topologize;

    fn p3_ctx() -> MapContext {
        let p = Convergence::p3();
        let t = topologize(&p);
        MapContext::new(CarrierMap::identity(p.carrier().clone()), p, t).unwrap()
    }

    #[test]
    fn p3_identity_vector() {
        let ctx = p3_ctx();
        let r = ctx.classify().unwrap();
        assert!(r.continuous && r.quotient && r.closed);
        assert!(!r.hereditarily_quotient && !r.adherent && !r.open);
        let back = MapContext::new(ctx.f.clone(), ctx.tau.clone(), ctx.xi.clone()).unwrap();
        assert!(!back.continuous());
        let w = ctx.witnesses(&r).unwrap();
        assert!(w.iter().any(|w| w.flag == "hereditarily_quotient"));
    }

    #[test]
    fn identity_is_everything() {
        let p = Convergence::p3();
        let ctx = MapContext::new(CarrierMap::identity(p.carrier().clone()), p.clone(), p).unwrap();
        let r = ctx.classify().unwrap();
        for flag in ClassificationReport::FLAGS {
            if flag != "graph_closed" {
                assert_eq!(r.get(flag), Some(true), "{flag}");
            }
        }
    }

    #[test]
    fn collapse_from_discrete_is_open() {
        let x = Carrier::with_size(2).unwrap();
        let y = Carrier::new(["p"]).unwrap();
        let f = CarrierMap::new(x.clone(), y.clone(), vec![0, 0]).unwrap();
        let ctx = MapContext::new(f, Convergence::discrete(x), Convergence::discrete(y)).unwrap();
        assert!(ctx.is_open_map().unwrap());
        assert!(ctx.maps_open_sets_to_open_sets());
    }

    #[test]
    fn final_and_initial_of_identity() {
        let p = Convergence::p3();
        let id = CarrierMap::identity(p.carrier().clone());
        assert_eq!(final_convergence(&id, &p).unwrap(), p);
        assert_eq!(initial_convergence(&id, &p).unwrap(), p);
    }

    #[test]
    fn non_surjective_maps_are_refused() {
        let x = Carrier::with_size(1).unwrap();
        let y = Carrier::with_size(2).unwrap();
        let f = CarrierMap::new(x.clone(), y.clone(), vec![0]).unwrap();
        let ctx = MapContext::new(f, Convergence::discrete(x), Convergence::discrete(y)).unwrap();
        assert!(matches!(ctx.classify(), Err(Error::NotSurjective)));
        assert!(ctx.continuous());
    }

    #[test]
    fn literal_quotient_inclusion_is_stronger() {
        // a ↦ p, b, c ↦ q; lim{a} = {a,b}; lim{p} = {p,q}
        let x = Carrier::with_size(3).unwrap();
        let y = Carrier::new(["p", "q"]).unwrap();
        let xi = Convergence::from_vicinities(x.clone(), &[0b001, 0b011, 0b100].map(Subset::from_bits)).unwrap();
        assert_eq!(xi.lim(Subset::singleton(0)), Subset::from_bits(0b011));
        let f = CarrierMap::new(x, y.clone(), vec![0, 1, 1]).unwrap();
        let tau = final_convergence(&f, &xi).unwrap();
        assert_eq!(tau.lim(Subset::singleton(0)), y.full());
        let ctx = MapContext::new(f, xi, tau).unwrap();
        assert!(ctx.is_quotient_like(FilterClass::Principal).unwrap());
        assert!(!ctx.quotient_literal(FilterClass::Principal).unwrap());
    }

    #[test]
    fn literal_perfect_cover_form_is_weaker() {
        // X = {a,b,c}, lim{b} = {b,c}; Y = {p,q}, lim{p} = {p,q}; a, b ↦ p, c ↦ q
        let x = Carrier::with_size(3).unwrap();
        let y = Carrier::new(["p", "q"]).unwrap();
        let xi = Convergence::from_vicinities(x.clone(), &[0b001, 0b010, 0b110].map(Subset::from_bits)).unwrap();
        assert_eq!(xi.lim(Subset::singleton(1)), Subset::from_bits(0b110));
        let tau = Convergence::from_vicinities(y.clone(), &[0b01, 0b11].map(Subset::from_bits)).unwrap();
        let f = CarrierMap::new(x, y, vec![0, 0, 1]).unwrap();
        let ctx = MapContext::new(f, xi, tau).unwrap();
        assert!(ctx.perfect_literal_covers(FilterClass::Principal).unwrap());
        assert!(!ctx.is_perfect_like(FilterClass::Principal).unwrap());
    }

    #[test]
    fn je_of_topologies() {
        let t = topologize(&Convergence::p3());
        assert!(is_je(&t, Functor::T, Functor::I1).unwrap());
        // E is the identity here and J is contractive, so ξ ≥ JEξ always
        assert!(is_je(&Convergence::p3(), Functor::T, Functor::I1).unwrap());
        assert!(is_je(&t, Functor::Seq, Functor::I1).is_err());
        assert!(is_je(&t, Functor::T, Functor::S).is_err());
    }

    #[test]
    fn graph_closed_identity_on_discrete() {
        let d = Convergence::discrete(Carrier::with_size(2).unwrap());
        let id = FiniteRelation::identity(d.carrier().clone());
        assert!(graph_closed(&id, &d, &d).unwrap());
        assert!(graph_closed_in_product(&id, &d, &d).unwrap());
    }
}
