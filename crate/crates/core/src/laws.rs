//! Law suites over the enumerated universes, and the machine-checked
//! preservation and implication tables.
//!
//! Every suite tallies instances and failures and keeps the first failing
//! instance. Parallel work is merged in enumeration order, so reports are
//! identical for any worker count.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::compact::{
    characteristic, compactoid_by_characteristic, completeness_number_finite, image_of_compact, is_compact_at,
    is_compactoid, is_relation_compact,
};
use crate::convergence::Convergence;
use crate::enumerate::{
    carrier, enumerate, search, search_space, surjections, topologies_by_open_sets, universe, ConvClass,
    EnumerationSpec, SearchOutcome, SearchTask,
};
use crate::error::{Error, Result};
use crate::family::{Carrier, CarrierMap, FiniteFilter, FiniteRelation, SetFamily, Subset};
use crate::functor::{
    apply_coreflector, check_functor_laws, is_topology, reflect, topologize, FilterClass, Functor, LawReport,
};
use crate::io::search_json;
use crate::maps::{graph_closed, graph_closed_in_product, is_je, ClassificationReport, MapContext};
use crate::symbolic::{cross_check, fan_check, prime_check, Exemplar};

/// Largest carrier the law suites enumerate.
pub const MAX_LAW_SIZE: usize = 3;
/// Sampled pairs for the lattice and functor laws at three points.
pub const SAMPLED_PAIRS: usize = 10_000;
/// Sampled `(convergence, family, set)` triples for cover duality at three points.
pub const SAMPLED_COVERS: usize = 10_000;
/// Random contexts checked for the 3→3 symmetry reduction.
pub const TRANSPORT_SAMPLES: usize = 300;
/// Samples for the symbolic cross-check against truncations.
pub const SYMBOLIC_SAMPLES: usize = 300;
const SEED: u64 = 0x5eed_f00d;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub instances: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    /// Unwraps a library result, counting an error as a failed instance.
    pub fn outcome<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {e}", what()));
                None
            }
        }
    }

    pub fn absorb(&mut self, other: Tally) {
        self.instances += other.instances;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn from_law_report(r: &LawReport) -> Tally {
        Tally {
            instances: r.instances(),
            failures: r.direction.failures + r.idempotent.failures + r.isotone.failures + r.functorial.failures,
            first_failure: r.first_failure.as_ref().map(|f| format!("{}: {f}", r.functor)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub claim: &'static str,
    #[serde(flatten)]
    pub tally: Tally,
}

/// One cell of the preservation table: a quotient type against a mixed
/// property at or below its own row.
#[derive(Clone, Debug, Serialize)]
pub struct PreservationCell {
    pub quotient_type: &'static str,
    pub property: &'static str,
    #[serde(flatten)]
    pub tally: Tally,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawsReport {
    pub size: usize,
    pub suites: Vec<Suite>,
    pub preservation_table: Vec<PreservationCell>,
}

impl LawsReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.tally.passed()) && self.preservation_table.iter().all(|c| c.tally.passed())
    }

    pub fn instances(&self) -> usize {
        self.suites.iter().map(|s| s.tally.instances).sum()
    }

    pub fn suite(&self, name: &str) -> Option<&Suite> {
        self.suites.iter().find(|s| s.name == name)
    }

    /// The first failing suite and its first failing instance.
    pub fn first_failure(&self) -> Option<(&'static str, String)> {
        self.suites
            .iter()
            .find(|s| !s.tally.passed())
            .map(|s| (s.name, s.tally.first_failure.clone().unwrap_or_default()))
    }
}

/// Rows of the preservation table: quotient type, its reflector, the mixed
/// property `J I1`. Strength decreases downwards.
pub const PRESERVATION_ROWS: [(&str, Functor, &str); 5] = [
    ("almost open", Functor::I, "countable character"),
    ("biquotient", Functor::S, "bisequential"),
    ("countably biquotient", Functor::S1, "countably bisequential"),
    ("hereditarily quotient", Functor::S0, "Frechet"),
    ("quotient", Functor::T, "sequential"),
];

/// `JE` flags of one convergence, rows as in [`PRESERVATION_ROWS`],
/// columns `Seq, I1, K`.
type JeFlags = [[bool; 3]; 5];

fn je_flags(conv: &Convergence, tally: &mut Tally) -> JeFlags {
    let mut out = [[false; 3]; 5];
    for (i, (_, j, _)) in PRESERVATION_ROWS.iter().enumerate() {
        for (k, e) in Functor::COREFLECTORS.iter().enumerate() {
            let r = is_je(conv, *j, *e);
            out[i][k] = tally.outcome(r, || format!("{j}{e} at {conv:?}")).unwrap_or(false);
        }
    }
    out
}

fn je_table(n: usize) -> (Vec<JeFlags>, Tally) {
    let parts: Vec<(JeFlags, Tally)> = universe(n)
        .par_iter()
        .map(|c| {
            let mut t = Tally::default();
            (je_flags(c, &mut t), t)
        })
        .collect();
    let mut tally = Tally::default();
    let flags = parts
        .into_iter()
        .map(|(f, t)| {
            tally.absorb(t);
            f
        })
        .collect();
    (flags, tally)
}

fn class_row(class: FilterClass) -> usize {
    match class {
        FilterClass::All => 1,
        FilterClass::CountablyBased => 2,
        FilterClass::Principal => 3,
        FilterClass::ClosedPrincipal => 4,
    }
}

fn class_index(class: FilterClass) -> usize {
    FilterClass::ALL.iter().position(|c| *c == class).expect("listed class")
}

/// Everything decided per `(f, ξ, τ)` triple.
#[derive(Clone, Debug, Default)]
pub struct TripleTallies {
    pub triples: usize,
    pub continuity: Tally,
    pub quotient_routes: Tally,
    pub perfect_routes: Tally,
    pub implications: Tally,
    /// One tally per entry of [`ClassificationReport::IMPLICATIONS`].
    pub arrows: Vec<Tally>,
    pub bijections: Tally,
    pub perfect_compact: Tally,
    pub quotient_compactoid: Tally,
    pub perfect_finite_form: Tally,
    pub preservation: Tally,
    /// `cells[i][j]`, for `j ≥ i`, per [`PRESERVATION_ROWS`].
    pub cells: Vec<Vec<Tally>>,
    pub je_routes: Tally,
}

impl TripleTallies {
    fn new() -> Self {
        TripleTallies {
            arrows: vec![Tally::default(); ClassificationReport::IMPLICATIONS.len()],
            cells: vec![vec![Tally::default(); PRESERVATION_ROWS.len()]; PRESERVATION_ROWS.len()],
            ..Default::default()
        }
    }

    fn absorb(&mut self, other: TripleTallies) {
        self.triples += other.triples;
        self.continuity.absorb(other.continuity);
        self.quotient_routes.absorb(other.quotient_routes);
        self.perfect_routes.absorb(other.perfect_routes);
        self.implications.absorb(other.implications);
        for (a, b) in self.arrows.iter_mut().zip(other.arrows) {
            a.absorb(b);
        }
        self.bijections.absorb(other.bijections);
        self.perfect_compact.absorb(other.perfect_compact);
        self.quotient_compactoid.absorb(other.quotient_compactoid);
        self.perfect_finite_form.absorb(other.perfect_finite_form);
        self.preservation.absorb(other.preservation);
        for (row, other_row) in self.cells.iter_mut().zip(other.cells) {
            for (a, b) in row.iter_mut().zip(other_row) {
                a.absorb(b);
            }
        }
        self.je_routes.absorb(other.je_routes);
    }
}

fn describe(ctx: &MapContext) -> String {
    format!("f = {:?}, ξ = {:?}, τ = {:?}", ctx.f.images(), ctx.xi, ctx.tau)
}

/// A nonempty `K ⊆ Y` compact at itself for every class filter.
fn compact_set(conv: &Convergence, k: Subset) -> Result<bool> {
    let fam = SetFamily::single(conv.carrier().clone(), k);
    is_compact_at(conv, &fam, &fam, FilterClass::All)
}

fn visit(ctx: &MapContext, je_xi: &JeFlags, je_tau: &JeFlags, s: &mut TripleTallies) {
    s.triples += 1;
    let label = || describe(ctx);

    let cont = ctx.continuous();
    s.continuity.check(cont == ctx.continuous_by_initial(), || {
        format!("continuity by initial, {}", label())
    });
    for class in FilterClass::ALL {
        let c = ctx.continuity_clauses(class);
        s.continuity.check(c[0] == c[1] && c[1] == c[2], || {
            format!("{} clauses {c:?}, {}", class.tag(), label())
        });
    }

    let mut q = [false; 4];
    let mut p = [false; 4];
    for (i, class) in FilterClass::ALL.into_iter().enumerate() {
        let routes = [
            ctx.quotient_by_adherence(class),
            ctx.quotient_by_reflector(class),
            ctx.quotient_by_covers(class),
        ];
        let routes: Option<Vec<bool>> = routes
            .into_iter()
            .map(|r| {
                s.quotient_routes
                    .outcome(r, || format!("{} quotient, {}", class.tag(), label()))
            })
            .collect();
        if let Some(r) = routes {
            s.quotient_routes.check(r[0] == r[1] && r[1] == r[2], || {
                format!("{} quotient routes {r:?}, {}", class.tag(), label())
            });
            q[i] = r[0];
        }
        let routes = [ctx.perfect_by_adherence(class), ctx.perfect_by_covers(class)];
        let routes: Option<Vec<bool>> = routes
            .into_iter()
            .map(|r| {
                s.perfect_routes
                    .outcome(r, || format!("{} perfect, {}", class.tag(), label()))
            })
            .collect();
        if let Some(r) = routes {
            s.perfect_routes.check(r[0] == r[1], || {
                format!("{} perfect routes {r:?}, {}", class.tag(), label())
            });
            p[i] = r[0];
        }
    }
    let open = s
        .quotient_routes
        .outcome(ctx.is_open_map(), || format!("open, {}", label()))
        .unwrap_or(false);
    let almost_open = s
        .quotient_routes
        .outcome(ctx.is_almost_open(), || format!("almost open, {}", label()))
        .unwrap_or(false);
    let graph = s
        .implications
        .outcome(graph_closed(ctx.f.relation(), &ctx.xi, &ctx.tau), || {
            format!("graph, {}", label())
        })
        .unwrap_or(false);
    let at = |c: FilterClass| class_index(c);
    let report = ClassificationReport {
        continuous: cont,
        open,
        almost_open,
        biquotient: q[at(FilterClass::All)],
        countably_biquotient: q[at(FilterClass::CountablyBased)],
        hereditarily_quotient: q[at(FilterClass::Principal)],
        quotient: q[at(FilterClass::ClosedPrincipal)],
        perfect: p[at(FilterClass::All)],
        countably_perfect: p[at(FilterClass::CountablyBased)],
        adherent: p[at(FilterClass::Principal)],
        closed: p[at(FilterClass::ClosedPrincipal)],
        graph_closed: graph,
    };
    for (k, (a, b)) in ClassificationReport::IMPLICATIONS.iter().enumerate() {
        if report.get(a) == Some(true) {
            let holds = report.get(b) == Some(true);
            s.arrows[k].check(holds, || format!("{a} without {b}, {}", label()));
            s.implications.check(holds, || format!("{a} without {b}, {}", label()));
        }
    }

    if ctx.f.is_injective() {
        for (i, class) in FilterClass::ALL.into_iter().enumerate() {
            s.bijections
                .check(q[i] == p[i], || format!("{} bijection, {}", class.tag(), label()));
        }
    }

    let inverse = ctx.f.relation().inverse();
    let initial = ctx.initial_convergence();
    if let Some(fin) = s
        .quotient_compactoid
        .outcome(ctx.final_convergence(), || format!("final, {}", label()))
    {
        for (i, class) in FilterClass::ALL.into_iter().enumerate() {
            let r = is_relation_compact(&inverse, &ctx.tau, &ctx.xi, class);
            if let Some(c) = s
                .perfect_compact
                .outcome(r, || format!("{} inverse compact, {}", class.tag(), label()))
            {
                s.perfect_compact.check(c == p[i], || {
                    format!("{}: perfect {} but inverse compact {c}, {}", class.tag(), p[i], label())
                });
            }
            let r = is_relation_compact(ctx.f.relation(), &initial, &fin, class);
            if let Some(c) = s
                .quotient_compactoid
                .outcome(r, || format!("{} compactoid, {}", class.tag(), label()))
            {
                s.quotient_compactoid.check(c == q[i], || {
                    format!("{}: quotient {} but compactoid {c}, {}", class.tag(), q[i], label())
                });
            }
        }
    }
    if report.perfect {
        for k in ctx.tau.carrier().nonempty_subsets() {
            let pre = ctx.f.preimage(k);
            let r = compact_set(&ctx.tau, k).and_then(|ck| Ok(!ck || compact_set(&ctx.xi, pre)?));
            if let Some(ok) = s
                .perfect_compact
                .outcome(r, || format!("compact preimage, {}", label()))
            {
                s.perfect_compact.check(ok, || {
                    format!(
                        "preimage of compact {} not compact, {}",
                        ctx.tau.carrier().format(k),
                        label()
                    )
                });
            }
        }
    }

    if is_topology(&ctx.xi) && is_topology(&ctx.tau) {
        s.perfect_finite_form.check(p.iter().all(|&v| v == p[0]), || {
            format!("perfect ladder {p:?}, {}", label())
        });
    }

    if cont {
        for (ji, j) in Functor::REFLECTORS.into_iter().enumerate() {
            let class = j.class().expect("reflector");
            let row = class_row(class);
            if !q[ji] {
                continue;
            }
            for (k, e) in Functor::COREFLECTORS.into_iter().enumerate() {
                if je_xi[row][k] {
                    s.preservation
                        .check(je_tau[row][k], || format!("{j}{e} not preserved, {}", label()));
                }
            }
        }
        let quotient_types = [
            almost_open,
            report.biquotient,
            report.countably_biquotient,
            report.hereditarily_quotient,
            report.quotient,
        ];
        let i1 = Functor::COREFLECTORS
            .iter()
            .position(|e| *e == Functor::I1)
            .expect("I1");
        for (i, &holds) in quotient_types.iter().enumerate() {
            if !holds {
                continue;
            }
            for j in i..PRESERVATION_ROWS.len() {
                if je_xi[j][i1] {
                    s.cells[i][j].check(je_tau[j][i1], || {
                        format!(
                            "{} does not preserve {}, {}",
                            PRESERVATION_ROWS[i].0,
                            PRESERVATION_ROWS[j].2,
                            label()
                        )
                    });
                }
            }
        }
    }
}

/// Carrier size pairs `(source, target)` for the triple pass on `n` points.
pub fn triple_sizes(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|m| (1..=m).map(move |k| (m, k))).collect()
}

struct JeCache {
    tables: HashMap<usize, Vec<JeFlags>>,
}

impl JeCache {
    fn build(sizes: impl IntoIterator<Item = usize>, tally: &mut Tally) -> Self {
        let mut tables = HashMap::new();
        for n in sizes {
            tables.entry(n).or_insert_with(|| {
                let (flags, t) = je_table(n);
                tally.absorb(t);
                flags
            });
        }
        JeCache { tables }
    }

    fn get(&self, n: usize) -> &[JeFlags] {
        &self.tables[&n]
    }
}

/// Every surjection between the listed sizes with every pair of
/// convergences, squares from three points on reduced by symmetry as in
/// [`search_space`].
pub fn triple_pass(sizes: &[(usize, usize)]) -> TripleTallies {
    let mut je_tally = Tally::default();
    let cache = JeCache::build(sizes.iter().flat_map(|&(m, k)| [m, k]), &mut je_tally);
    let mut total = TripleTallies::new();
    total.je_routes.absorb(je_tally);
    for &(m, k) in sizes {
        let (sources, targets) = (universe(m), universe(k));
        let (je_src, je_tgt) = (cache.get(m), cache.get(k));
        let (maps, source_indices) = search_space(m, k);
        for f in maps {
            let parts: Vec<TripleTallies> = source_indices
                .par_iter()
                .map(|&xi_i| {
                    let mut s = TripleTallies::new();
                    for (tau_i, tau) in targets.iter().enumerate() {
                        let ctx =
                            MapContext::new(f.clone(), sources[xi_i].clone(), tau.clone()).expect("universe carriers");
                        visit(&ctx, &je_src[xi_i], &je_tgt[tau_i], &mut s);
                    }
                    s
                })
                .collect();
            for p in parts {
                total.absorb(p);
            }
        }
    }
    total
}

fn permutations(n: usize) -> Vec<CarrierMap> {
    surjections(n, n)
}

/// Classification is invariant under the moves the reduction relies on.
pub fn transport_check(n: usize, samples: usize, seed: u64) -> Tally {
    let convs = universe(n);
    let perms = permutations(n);
    let id = CarrierMap::identity(carrier(n));
    let parts: Vec<Tally> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut t = Tally::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            let pi = &perms[rng.gen_range(0..perms.len())];
            let sigma = &perms[rng.gen_range(0..perms.len())];
            let xi = &convs[rng.gen_range(0..convs.len())];
            let tau = &convs[rng.gen_range(0..convs.len())];
            let classify = |f: &CarrierMap, x: &Convergence, y: &Convergence| {
                MapContext::new(f.clone(), x.clone(), y.clone()).and_then(|c| c.classify())
            };
            let push = |f: &CarrierMap, c: &Convergence| crate::maps::final_convergence(f, c);
            let base = classify(pi, xi, tau);
            let moved = push(pi, xi).and_then(|pxi| classify(&id, &pxi, tau));
            let what = || format!("π = {:?}, ξ = {xi:?}, τ = {tau:?}", pi.images());
            if let (Some(a), Some(b)) = (t.outcome(base, what), t.outcome(moved, what)) {
                t.check(a == b, || format!("bijection move changes the class, {}", what()));
            }
            let plain = classify(&id, xi, tau);
            let relabeled = push(sigma, xi)
                .and_then(|sx| Ok((sx, push(sigma, tau)?)))
                .and_then(|(sx, st)| classify(&id, &sx, &st));
            if let (Some(a), Some(b)) = (t.outcome(plain, what), t.outcome(relabeled, what)) {
                t.check(a == b, || {
                    format!("relabeling by {:?} changes the class, {}", sigma.images(), what())
                });
            }
            t
        })
        .collect();
    let mut total = Tally::default();
    for p in parts {
        total.absorb(p);
    }
    total
}

fn sample_pairs(len: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.gen_range(0..len), rng.gen_range(0..len)))
        .collect()
}

fn all_pairs(len: usize) -> Vec<(usize, usize)> {
    (0..len).flat_map(|i| (0..len).map(move |j| (i, j))).collect()
}

fn sup2(a: &Convergence, b: &Convergence) -> Convergence {
    Convergence::sup(&[a.clone(), b.clone()]).expect("same carrier")
}

fn inf2(a: &Convergence, b: &Convergence) -> Convergence {
    Convergence::inf(&[a.clone(), b.clone()]).expect("same carrier")
}

/// Axioms: every enumerated table validates and round-trips.
fn axioms_suite(n: usize) -> Tally {
    let mut t = Tally::default();
    for m in 1..=n {
        for c in universe(m) {
            let table: Vec<Option<Subset>> = c.table().iter().copied().map(Some).collect();
            let ok = matches!(Convergence::validate(c.carrier().clone(), &table), Ok(d) if d == *c);
            t.check(ok, || format!("table {c:?} does not validate"));
        }
    }
    t
}

/// Lattice laws for convergences, including sup and inf as least upper and
/// greatest lower bounds found by scanning the universe, and for filters.
fn lattice_suite(n: usize) -> Tally {
    let mut t = Tally::default();
    for m in 1..=n {
        let convs = universe(m);
        let (pairs, oracle_pairs) = if m <= 2 {
            (all_pairs(convs.len()), all_pairs(convs.len()))
        } else {
            let pairs = sample_pairs(convs.len(), SAMPLED_PAIRS, SEED);
            let oracle = pairs[..SAMPLED_PAIRS / 20].to_vec();
            (pairs, oracle)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ m as u64);
        for &(i, j) in &pairs {
            let (a, b) = (&convs[i], &convs[j]);
            let c = &convs[rng.gen_range(0..convs.len())];
            let (s, f) = (sup2(a, b), inf2(a, b));
            let what = || format!("ξ = {a:?}, τ = {b:?}");
            t.check(s == sup2(b, a) && f == inf2(b, a), || {
                format!("commutativity, {}", what())
            });
            t.check(sup2(a, a) == *a && inf2(a, a) == *a, || {
                format!("idempotence, {}", what())
            });
            t.check(sup2(a, &f) == *a && inf2(a, &s) == *a, || {
                format!("absorption, {}", what())
            });
            t.check(
                sup2(&s, c) == sup2(a, &sup2(b, c)) && inf2(&f, c) == inf2(a, &inf2(b, c)),
                || format!("associativity with {c:?}, {}", what()),
            );
            t.check(a.is_finer_than(b) == (s == *a), || format!("order by sup, {}", what()));
            t.check(s.is_finer_than(a) && s.is_finer_than(b), || {
                format!("sup above, {}", what())
            });
            t.check(a.is_finer_than(&f) && b.is_finer_than(&f), || {
                format!("inf below, {}", what())
            });
        }
        let parts: Vec<Tally> = oracle_pairs
            .par_iter()
            .map(|&(i, j)| {
                let mut t = Tally::default();
                let (a, b) = (&convs[i], &convs[j]);
                let uppers: Vec<&Convergence> = convs
                    .iter()
                    .filter(|z| z.is_finer_than(a) && z.is_finer_than(b))
                    .collect();
                let lowers: Vec<&Convergence> = convs
                    .iter()
                    .filter(|z| a.is_finer_than(z) && b.is_finer_than(z))
                    .collect();
                let lub = uppers.iter().find(|z| uppers.iter().all(|u| u.is_finer_than(z)));
                let glb = lowers.iter().find(|z| lowers.iter().all(|l| z.is_finer_than(l)));
                t.check(lub.is_some_and(|z| **z == sup2(a, b)), || {
                    format!("sup is not the least upper bound of {a:?}, {b:?}")
                });
                t.check(glb.is_some_and(|z| **z == inf2(a, b)), || {
                    format!("inf is not the greatest lower bound of {a:?}, {b:?}")
                });
                t
            })
            .collect();
        for p in parts {
            t.absorb(p);
        }
        let c = carrier(m);
        let filters: Vec<FiniteFilter> = c
            .subsets()
            .map(|b| FiniteFilter::principal(c.clone(), b).expect("inside carrier"))
            .collect();
        for f in &filters {
            for g in &filters {
                let ok = (|| -> Result<bool> {
                    let (meet, join) = (f.meet(g)?, f.join(g)?);
                    Ok(meet == g.meet(f)?
                        && join == g.join(f)?
                        && meet.is_coarser_than(f)?
                        && f.is_coarser_than(&join)?
                        && f.meet(&f.join(g)?)? == *f
                        && f.join(&f.meet(g)?)? == *f)
                })();
                t.check(ok.unwrap_or(false), || format!("filter lattice at {f:?}, {g:?}"));
            }
        }
    }
    t
}

fn functor_suite(n: usize) -> Tally {
    let mut t = Tally::default();
    for m in 1..=n {
        let convs = universe(m);
        let pairs = if m <= 2 {
            all_pairs(convs.len())
        } else {
            sample_pairs(convs.len(), SAMPLED_PAIRS, SEED + 1)
        };
        let reports: Vec<LawReport> = Functor::ALL
            .par_iter()
            .map(|f| check_functor_laws(*f, convs, &pairs))
            .collect();
        for r in &reports {
            t.absorb(Tally::from_law_report(r));
        }
    }
    t
}

fn collapse_suite(n: usize) -> Tally {
    let mut t = Tally::default();
    for m in 1..=n {
        for c in universe(m) {
            let p = reflect(FilterClass::Principal, c);
            t.check(
                p == reflect(FilterClass::CountablyBased, c) && p == reflect(FilterClass::All, c),
                || format!("reflectors differ at {c:?}"),
            );
            for e in Functor::COREFLECTORS {
                let r = apply_coreflector(e, c);
                if let Some(ec) = t.outcome(r, || format!("{e} at {c:?}")) {
                    t.check(ec == *c, || format!("{e} is not the identity at {c:?}"));
                }
            }
        }
    }
    t
}

fn order_suite(n: usize) -> Tally {
    let mut t = Tally::default();
    for m in 1..=n {
        for c in universe(m) {
            let [tc, s0, s1, s] = Functor::REFLECTORS.map(|f| f.apply(c));
            t.check(
                s0.is_finer_than(&tc) && s1.is_finer_than(&s0) && s.is_finer_than(&s1),
                || format!("reflector order fails at {c:?}"),
            );
            t.check(topologize(c) == tc, || {
                format!("topologize differs from the closed reflector at {c:?}")
            });
            t.check(is_topology(&tc), || format!("T is not topological at {c:?}"));
        }
    }
    t
}

/// Closure by adherence iteration against the open-set route, and the
/// closure axioms of the topological modification.
fn closure_suite(n: usize) -> Tally {
    let mut t = Tally::default();
    for m in 1..=n {
        for c in universe(m) {
            let size = c.size();
            let opens = c.open_sets();
            for a in c.carrier().subsets() {
                let cl = c.closure_by_adherence(a);
                t.check(cl == c.closure_by_opens(a), || {
                    format!("closures differ at {} in {c:?}", c.carrier().format(a))
                });
                t.check(a.is_subset_of(cl) && c.closure_by_adherence(cl) == cl, || {
                    format!("closure axioms at {c:?}")
                });
                t.check(
                    opens.contains(a) == c.is_closed(a.complement(size)) && opens.contains(a) == c.is_open(a),
                    || format!("open and closed disagree at {} in {c:?}", c.carrier().format(a)),
                );
                for b in c.carrier().subsets() {
                    let joint = c.closure_by_adherence(a.union(b));
                    t.check(joint == cl.union(c.closure_by_adherence(b)), || {
                        format!("closure additivity at {c:?}")
                    });
                }
            }
            t.check(c.closure_by_adherence(Subset::EMPTY).is_empty(), || {
                format!("closure of the empty set at {c:?}")
            });
        }
    }
    t
}

fn all_families(c: &Arc<Carrier>) -> Vec<SetFamily> {
    let subsets: Vec<Subset> = c.subsets().collect();
    (0u64..1 << subsets.len())
        .map(|code| {
            let members = subsets
                .iter()
                .enumerate()
                .filter(|(i, _)| code >> i & 1 == 1)
                .map(|(_, s)| *s);
            SetFamily::new(c.clone(), members).expect("inside carrier")
        })
        .collect()
}

fn cover_check(t: &mut Tally, conv: &Convergence, fam: &SetFamily, a: Subset) {
    let r = conv.cover_routes(fam, a);
    let what = || format!("cover of {} by {} in {conv:?}", conv.carrier().format(a), fam.format());
    if let Some(r) = t.outcome(r, what) {
        t.check(r[0] == r[1] && r[1] == r[2], || format!("{} gives {r:?}", what()));
    }
}

fn cover_suite(n: usize) -> Tally {
    let mut t = Tally::default();
    for m in 1..=n.min(2) {
        let c = carrier(m);
        let fams = all_families(&c);
        for conv in universe(m) {
            for fam in &fams {
                for a in c.subsets() {
                    cover_check(&mut t, conv, fam, a);
                }
            }
        }
    }
    if n >= 3 {
        let c = carrier(3);
        let convs = universe(3);
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
        for _ in 0..SAMPLED_COVERS {
            let conv = &convs[rng.gen_range(0..convs.len())];
            let k = rng.gen_range(0..=4);
            let members: Vec<Subset> = (0..k).map(|_| Subset::from_bits(rng.gen_range(0..8))).collect();
            let fam = SetFamily::new(c.clone(), members).expect("inside carrier");
            let a = Subset::from_bits(rng.gen_range(0..8));
            cover_check(&mut t, conv, &fam, a);
        }
    }
    t
}

/// Compactoid sets through the characteristic convergence, and compactness
/// at a point against the pseudotopological modification.
fn comp_char_suite(n: usize) -> Tally {
    let mut t = Tally::default();
    for m in 1..=n {
        for conv in universe(m) {
            let chi = characteristic(conv);
            let s = reflect(FilterClass::All, conv);
            for h in conv.carrier().nonempty_subsets() {
                for class in FilterClass::ALL {
                    t.check(
                        is_compactoid(conv, h, class) == compactoid_by_characteristic(conv, h, class),
                        || format!("{} compactoid {} in {conv:?}", class.tag(), conv.carrier().format(h)),
                    );
                }
                t.check(chi.lim(h).is_empty() == conv.lim(h).is_empty(), || {
                    format!("characteristic limits at {} in {conv:?}", conv.carrier().format(h))
                });
                if !conv.lim(h).is_empty() {
                    t.check(is_compactoid(conv, h, FilterClass::All), || {
                        format!("convergent but not compactoid in {conv:?}")
                    });
                }
                let up = SetFamily::single(conv.carrier().clone(), h);
                for x in 0..conv.size() {
                    let at = SetFamily::single(conv.carrier().clone(), Subset::singleton(x));
                    let r = is_compact_at(conv, &up, &at, FilterClass::All);
                    if let Some(compact) = t.outcome(r, || format!("compact at in {conv:?}")) {
                        t.check(compact == s.lim(h).contains(x), || {
                            format!("{} compact at {x} is {compact} in {conv:?}", conv.carrier().format(h))
                        });
                    }
                }
            }
            let r = completeness_number_finite(conv);
            if let Some(k) = t.outcome(r, || format!("completeness number of {conv:?}")) {
                t.check(k == 0, || format!("completeness number {k} for {conv:?}"));
            }
        }
    }
    t
}

/// Images of compact filters under compact relations, 2×2. Filters on a
/// finite carrier are the principal `↑A`, `A ≠ ∅`.
fn image_comp_suite() -> Tally {
    let c = carrier(2);
    let fams: Vec<SetFamily> = c.nonempty_subsets().map(|a| SetFamily::single(c.clone(), a)).collect();
    let convs = universe(2);
    let relations = FiniteRelation::all(&c, &c);
    let parts: Vec<Tally> = relations
        .par_iter()
        .map(|rel| {
            let mut t = Tally::default();
            for theta in convs {
                for sigma in convs {
                    for class in FilterClass::TRANSFERABLE {
                        for fam in &fams {
                            for b in c.subsets() {
                                let r = image_of_compact(rel, theta, sigma, fam, b, class);
                                let what = || {
                                    format!("{} image of {} under {:?}", class.tag(), fam.format(), rel.graph_bits())
                                };
                                if let Some(found) = t.outcome(r, what) {
                                    t.check(found.is_none(), || format!("{}: {}", what(), found.unwrap_or_default()));
                                }
                            }
                        }
                    }
                }
            }
            t
        })
        .collect();
    let mut t = Tally::default();
    for p in parts {
        t.absorb(p);
    }
    t
}

/// Everywhere graph-closed, closed in the product, and the same for the
/// inverse relation with the roles swapped, 2×2.
fn graph_closed_suite() -> Tally {
    let c = carrier(2);
    let mut t = Tally::default();
    for rel in FiniteRelation::all(&c, &c) {
        let inv = rel.inverse();
        for theta in universe(2) {
            for sigma in universe(2) {
                let r = (|| -> Result<[bool; 3]> {
                    Ok([
                        graph_closed(&rel, theta, sigma)?,
                        graph_closed_in_product(&rel, theta, sigma)?,
                        graph_closed(&inv, sigma, theta)?,
                    ])
                })();
                let what = || format!("relation {:?}, θ = {theta:?}, σ = {sigma:?}", rel.graph_bits());
                if let Some(r) = t.outcome(r, what) {
                    t.check(r[0] == r[1] && r[1] == r[2], || format!("{} gives {r:?}", what()));
                }
            }
        }
    }
    t
}

/// Number of limit tables on `n` points satisfying both axioms, by direct
/// scan of every table.
pub fn count_convergences_by_scan(n: usize) -> usize {
    let sets = (1usize << n) - 1;
    let full = (1u32 << n) - 1;
    let mut table = vec![0u32; sets + 1];
    fn fill(k: usize, table: &mut [u32], sets: usize, full: u32) -> usize {
        if k > sets {
            return 1;
        }
        let mut count = 0;
        for lim in 0..=full {
            // centered: x ∈ lim {x}
            if k.is_power_of_two() && lim & k as u32 == 0 {
                continue;
            }
            // isotone: lim A ⊆ lim B for every B ⊆ A already filled
            let ok = (1..k).all(|b| b & !k != 0 || lim & !table[b] == 0);
            if ok {
                table[k] = lim;
                count += fill(k + 1, table, sets, full);
            }
        }
        count
    }
    fill(1, &mut table, sets, full)
}

fn enumeration_suite(n: usize) -> Tally {
    let mut t = Tally::default();
    for m in 1..=n {
        let scan = count_convergences_by_scan(m);
        t.check(universe(m).len() == scan, || {
            format!("{} convergences on {m} points, scan gives {scan}", universe(m).len())
        });
        let pretop = enumerate(&EnumerationSpec::new(m, ConvClass::Pretopology));
        if let Some(p) = t.outcome(pretop, || format!("pretopologies on {m}")) {
            let oracle = 1usize << (m * (m - 1));
            t.check(p.len() == oracle, || {
                format!("{} pretopologies on {m} points, expected {oracle}", p.len())
            });
        }
        let top = enumerate(&EnumerationSpec::new(m, ConvClass::Topology));
        if let Some(top) = t.outcome(top, || format!("topologies on {m}")) {
            let mut by_conv: Vec<Vec<Subset>> = top.iter().map(|c| c.open_sets().members().to_vec()).collect();
            let mut by_opens = topologies_by_open_sets(m);
            by_conv.sort();
            by_opens.sort();
            t.check(by_conv == by_opens, || {
                format!("topologies on {m} points differ from the open-set scan")
            });
        }
    }
    let counts = |workers: usize| -> Result<Vec<Vec<Convergence>>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Document(e.to_string()))?;
        pool.install(|| {
            [ConvClass::Pretopology, ConvClass::Topology]
                .into_iter()
                .map(|class| enumerate(&EnumerationSpec::new(n, class)))
                .collect()
        })
    };
    if let (Some(a), Some(b)) = (
        t.outcome(counts(1), || "one worker".into()),
        t.outcome(counts(4), || "four workers".into()),
    ) {
        t.check(a == b, || "enumeration depends on the worker count".into());
    }
    t
}

/// `{0}` in the Sierpiński space is compact at itself and not closed.
fn sierpinski_suite() -> Tally {
    let mut t = Tally::default();
    let s = Convergence::sierpinski();
    let c = s.carrier().clone();
    let zero = Subset::singleton(0);
    let expected: Vec<Subset> = vec![Subset::EMPTY, zero, c.full()];
    t.check(s.open_sets().members() == expected.as_slice(), || {
        "Sierpinski opens".into()
    });
    let single = SetFamily::single(c.clone(), zero);
    for class in FilterClass::ALL {
        let r = is_compact_at(&s, &single, &single, class);
        if let Some(ok) = t.outcome(r, || "Sierpinski compactness".into()) {
            t.check(ok, || format!("{{0}} is not {} compact at itself", class.tag()));
        }
    }
    t.check(!s.is_closed(zero), || "{0} is closed".into());
    t.check(s.is_open(zero) && !s.is_open(Subset::singleton(1)), || {
        "Sierpinski open points".into()
    });
    t
}

fn symbolic_suite() -> Tally {
    let mut t = Tally::default();
    if let Some(r) = t.outcome(fan_check(), || "FAN check".into()) {
        t.check(r.passed(), || format!("FAN check failed: {r:?}"));
    }
    if let Some(r) = t.outcome(prime_check(), || "PRIME check".into()) {
        t.check(r.passed(), || format!("PRIME check failed: {r:?}"));
    }
    for (carrier, seed) in [(Exemplar::Fan, SEED), (Exemplar::Prime, SEED + 1)] {
        if let Some(r) = t.outcome(cross_check(carrier, SYMBOLIC_SAMPLES, seed), || "truncation".into()) {
            t.instances += r.comparisons;
            t.failures += r.mismatches.len();
            if t.first_failure.is_none() {
                t.first_failure = r.mismatches.first().cloned();
            }
        }
    }
    t
}

fn suite(name: &'static str, claim: &'static str, tally: Tally) -> Suite {
    Suite { name, claim, tally }
}

/// Runs one suite that does not need the triple pass, by name.
pub fn standalone_suite(name: &str, n: usize) -> Option<Tally> {
    Some(match name {
        "axioms" => axioms_suite(n),
        "lattice" => lattice_suite(n),
        "functor-laws" => functor_suite(n),
        "finite-collapse" => collapse_suite(n),
        "reflector-order" => order_suite(n),
        "closure" => closure_suite(n),
        "cover-duality" => cover_suite(n),
        "compactness-characterization" => comp_char_suite(n),
        "image-compact" => image_comp_suite(),
        "graph-closed" => graph_closed_suite(),
        "transport" => transport_check(n, TRANSPORT_SAMPLES, SEED + 3),
        "enumeration" => enumeration_suite(n),
        "sierpinski" => sierpinski_suite(),
        "symbolic" => symbolic_suite(),
        _ => return None,
    })
}

/// Runs every suite on carriers of at most `n` points.
pub fn run_laws(n: usize) -> Result<LawsReport> {
    if !(1..=MAX_LAW_SIZE).contains(&n) {
        return Err(Error::EnumerationCap {
            class: "law suites".into(),
            size: n,
            cap: MAX_LAW_SIZE,
        });
    }
    let triples = triple_pass(&triple_sizes(n));
    let transport = if n >= 3 {
        transport_check(n, TRANSPORT_SAMPLES, SEED + 3)
    } else {
        Tally::default()
    };
    let suites = vec![
        suite(
            "axioms",
            "enumerated limit tables are centered and isotone",
            axioms_suite(n),
        ),
        suite(
            "lattice",
            "sup and inf are the lattice operations of the finer order; filters form a lattice",
            lattice_suite(n),
        ),
        suite(
            "functor-laws",
            "reflectors are contractive, coreflectors expansive; all idempotent, isotone, functorial",
            functor_suite(n),
        ),
        suite(
            "finite-collapse",
            "principal, countably based and all-filter reflectors agree; coreflectors are identities",
            collapse_suite(n),
        ),
        suite(
            "reflector-order",
            "T ≤ S0 ≤ S1 ≤ S, and topologizing equals the closed-class reflector",
            order_suite(n),
        ),
        suite(
            "closure",
            "closure by adherence iteration equals closure from open sets",
            closure_suite(n),
        ),
        suite(
            "continuity",
            "continuity clauses agree for every class, and with the initial convergence",
            triples.continuity,
        ),
        suite(
            "cover-duality",
            "direct covers, inherence and adherence of complements agree",
            cover_suite(n),
        ),
        suite(
            "quotient-routes",
            "adherence, reflector and cover forms of quotient-like maps agree",
            triples.quotient_routes,
        ),
        suite(
            "perfect-routes",
            "adherence and cover forms of perfect-like maps agree",
            triples.perfect_routes,
        ),
        suite(
            "implications",
            "every arrow of the implication table holds",
            triples.implications,
        ),
        suite(
            "bijections",
            "a bijection is quotient-like iff perfect-like, per class",
            triples.bijections,
        ),
        suite(
            "perfect-compact",
            "perfect-like iff the inverse relation is compact; perfect maps pull back compact sets",
            triples.perfect_compact,
        ),
        suite(
            "quotient-compactoid",
            "quotient-like iff the map is compact from the initial to the final convergence",
            triples.quotient_compactoid,
        ),
        suite(
            "compactness-characterization",
            "compactoid sets through the characteristic convergence; compact at a point iff a limit in S",
            comp_char_suite(n),
        ),
        suite(
            "image-compact",
            "compact relations carry compact families to compact families",
            image_comp_suite(),
        ),
        suite(
            "preservation",
            "continuous J-quotient maps preserve JE",
            triples.preservation,
        ),
        suite(
            "je-routes",
            "JE by inequality agrees with the identity quotient test",
            triples.je_routes,
        ),
        suite(
            "perfect-finite-form",
            "between finite topologies closed, adherent, countably perfect and perfect agree",
            triples.perfect_finite_form,
        ),
        suite(
            "graph-closed",
            "everywhere graph-closed iff closed in the product iff the inverse is",
            graph_closed_suite(),
        ),
        suite(
            "transport",
            "bijections and relabelings preserve the classification",
            transport,
        ),
        suite(
            "enumeration",
            "enumeration counts match independent scans and do not depend on workers",
            enumeration_suite(n),
        ),
        suite(
            "sierpinski",
            "{0} is compact at itself and not closed",
            sierpinski_suite(),
        ),
        suite(
            "symbolic",
            "FAN is not a topology, PRIME is not a pseudotopology, truncations agree",
            symbolic_suite(),
        ),
    ];
    let mut preservation_table = Vec::new();
    for (i, row) in triples.cells.into_iter().enumerate() {
        for (j, tally) in row.into_iter().enumerate().skip(i) {
            preservation_table.push(PreservationCell {
                quotient_type: PRESERVATION_ROWS[i].0,
                property: PRESERVATION_ROWS[j].2,
                tally,
            });
        }
    }
    Ok(LawsReport {
        size: n,
        suites,
        preservation_table,
    })
}

/// Predicate witnessing that an arrow `stronger ⟹ weaker` does not reverse.
pub fn reversal_predicate(stronger: &str, weaker: &str) -> Option<&'static str> {
    Some(match (stronger, weaker) {
        ("open", "almost_open") => "almost-open-not-open",
        ("almost_open", "biquotient") => "biquotient-not-almost-open",
        ("biquotient", "countably_biquotient") => "countably-biquotient-not-biquotient",
        ("countably_biquotient", "hereditarily_quotient") => "hereditarily-quotient-not-countably-biquotient",
        ("hereditarily_quotient", "quotient") => "quotient-not-hereditarily-quotient",
        ("perfect", "countably_perfect") => "countably-perfect-not-perfect",
        ("countably_perfect", "adherent") => "adherent-not-countably-perfect",
        ("adherent", "closed") => "closed-not-adherent",
        ("perfect", "biquotient") => "biquotient-not-perfect",
        ("countably_perfect", "countably_biquotient") => "countably-biquotient-not-countably-perfect",
        ("adherent", "hereditarily_quotient") => "hereditarily-quotient-not-adherent",
        ("closed", "quotient") => "quotient-not-closed",
        _ => return None,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Reversal {
    /// A triple with the weaker property and not the stronger.
    Witness { predicate: &'static str, document: Value },
    /// Exhaustive search found none: the two classes coincide on the
    /// searched carriers.
    CollapsesAtFiniteScale { predicate: &'static str, checked: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrowCell {
    pub stronger: &'static str,
    pub weaker: &'static str,
    #[serde(flatten)]
    pub tally: Tally,
    pub reversal: Reversal,
}

#[derive(Clone, Debug, Serialize)]
pub struct PreservationRow {
    pub quotient_type: &'static str,
    pub reflector: &'static str,
    pub property: &'static str,
    pub je_type: String,
    /// The properties of this row and the rows below it.
    pub preserves: Vec<PreservationCell>,
}

/// The identity from P3 to its topological modification.
#[derive(Clone, Debug, Serialize)]
pub struct ExampleCheck {
    pub name: &'static str,
    pub flags: ClassificationReport,
    pub expected_vector_holds: bool,
    pub witnesses: Vec<&'static str>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tables {
    pub triples: usize,
    pub preservation: Vec<PreservationRow>,
    pub implications: Vec<ArrowCell>,
    pub example: ExampleCheck,
}

impl Tables {
    pub fn passed(&self) -> bool {
        self.preservation
            .iter()
            .all(|r| r.preserves.iter().all(|c| c.tally.passed()))
            && self.implications.iter().all(|a| a.tally.passed())
            && self.example.expected_vector_holds
    }
}

fn p3_example() -> Result<ExampleCheck> {
    let p3 = Convergence::p3();
    let t = topologize(&p3);
    let ctx = MapContext::new(CarrierMap::identity(p3.carrier().clone()), p3, t)?;
    let flags = ctx.classify()?;
    let expected_vector_holds = flags.continuous
        && flags.quotient
        && flags.closed
        && !flags.hereditarily_quotient
        && !flags.adherent
        && !flags.open;
    let mut witnesses = Vec::new();
    for pred in crate::enumerate::PREDICATES {
        if pred.uses_target && (pred.test)(&ctx)? {
            witnesses.push(pred.name);
        }
    }
    Ok(ExampleCheck {
        name: "identity from P3 to its topological modification",
        flags,
        expected_vector_holds,
        witnesses,
    })
}

/// The preservation and implication tables, re-derived from a triple pass
/// over the search sizes and from witness searches.
pub fn emit_tables() -> Result<Tables> {
    let sizes = crate::enumerate::SEARCH_SIZES;
    let triples = triple_pass(&sizes);
    let mut implications = Vec::new();
    for (k, (a, b)) in ClassificationReport::IMPLICATIONS.into_iter().enumerate() {
        let predicate = reversal_predicate(a, b).expect("every arrow has a reversal predicate");
        let task = SearchTask::new(predicate)?;
        let reversal = match search(&task)? {
            outcome @ SearchOutcome::Witness { .. } => Reversal::Witness {
                predicate,
                document: search_json(predicate, &outcome),
            },
            SearchOutcome::Exhausted { checked } => Reversal::CollapsesAtFiniteScale { predicate, checked },
        };
        implications.push(ArrowCell {
            stronger: a,
            weaker: b,
            tally: triples.arrows[k].clone(),
            reversal,
        });
    }
    let mut preservation = Vec::new();
    for (i, (qt, j, prop)) in PRESERVATION_ROWS.into_iter().enumerate() {
        preservation.push(PreservationRow {
            quotient_type: qt,
            reflector: j.name(),
            property: prop,
            je_type: format!("{}{}", if j == Functor::I { "" } else { j.name() }, Functor::I1.name()),
            preserves: (i..PRESERVATION_ROWS.len())
                .map(|k| PreservationCell {
                    quotient_type: qt,
                    property: PRESERVATION_ROWS[k].2,
                    tally: triples.cells[i][k].clone(),
                })
                .collect(),
        });
    }
    Ok(Tables {
        triples: triples.triples,
        preservation,
        implications,
        example: p3_example()?,
    })
}
