//! Invariants on random convergences with up to five points, past the
//! sizes the exhaustive suites reach.

use std::sync::Arc;

use proptest::prelude::*;

use finconv::functor::{is_pretopology, is_topology, reflect, topologize};
use finconv::io::{convergence_json, parse_convergence, to_pretty};
use finconv::maps::final_convergence;
use finconv::{Carrier, CarrierMap, Convergence, FilterClass, Functor, MapContext, Subset};

/// `x ∈ lim ↑A` iff `A` lies inside one of the generators of `x`; every
/// finite convergence has this form.
fn build(n: usize, gens: &[Vec<u32>]) -> Convergence {
    let carrier = Carrier::with_size(n).unwrap();
    let full = Subset::full(n).bits();
    Convergence::from_fn(carrier, |a| {
        let mut out = Subset::EMPTY;
        for (x, gs) in gens.iter().enumerate() {
            let x_gens = gs.iter().map(|g| Subset::from_bits((g | 1 << x) & full));
            if a.is_subset_of(Subset::singleton(x)) || x_gens.into_iter().any(|g| a.is_subset_of(g)) {
                out = out.union(Subset::singleton(x));
            }
        }
        out
    })
    .unwrap()
}

fn convergence(n: usize) -> impl Strategy<Value = Convergence> {
    prop::collection::vec(prop::collection::vec(0u32..(1 << n), 0..4), n).prop_map(move |g| build(n, &g))
}

fn any_convergence() -> impl Strategy<Value = Convergence> {
    (1usize..=5).prop_flat_map(convergence)
}

fn pair() -> impl Strategy<Value = (Convergence, Convergence)> {
    (1usize..=5).prop_flat_map(|n| (convergence(n), convergence(n)))
}

fn with_surjection() -> impl Strategy<Value = (Convergence, Vec<usize>, usize)> {
    (1usize..=4).prop_flat_map(|n| {
        (1..=n).prop_flat_map(move |k| {
            (convergence(n), Just(k), prop::collection::vec(0..k, n)).prop_map(move |(c, k, mut images)| {
                // force surjectivity by pinning the first k points
                for (i, img) in images.iter_mut().take(k).enumerate() {
                    *img = i;
                }
                (c, images, k)
            })
        })
    })
}

fn points(n: usize) -> Arc<Carrier> {
    Carrier::with_size(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn reflectors_are_contractive_and_idempotent(c in any_convergence()) {
        for f in Functor::REFLECTORS {
            let r = f.apply(&c);
            prop_assert!(c.is_finer_than(&r), "{} is not contractive", f.name());
            prop_assert_eq!(f.apply(&r), r.clone(), "{} is not idempotent", f.name());
        }
    }

    #[test]
    fn coreflectors_are_identities(c in any_convergence()) {
        for f in Functor::COREFLECTORS {
            prop_assert_eq!(f.apply(&c), c.clone());
        }
    }

    #[test]
    fn reflectors_are_ordered(c in any_convergence()) {
        let [t, s0, s1, s] = Functor::REFLECTORS.map(|f| f.apply(&c));
        prop_assert!(s0.is_finer_than(&t));
        prop_assert!(s1.is_finer_than(&s0));
        prop_assert!(s.is_finer_than(&s1));
        prop_assert!(is_topology(&t));
        prop_assert!(is_pretopology(&s0));
        prop_assert_eq!(topologize(&c), reflect(FilterClass::ClosedPrincipal, &c));
    }

    #[test]
    fn filter_classes_collapse(c in any_convergence()) {
        let p = reflect(FilterClass::Principal, &c);
        prop_assert_eq!(reflect(FilterClass::CountablyBased, &c), p.clone());
        prop_assert_eq!(reflect(FilterClass::All, &c), p);
    }

    #[test]
    fn reflectors_are_isotone((a, b) in pair()) {
        let finer = Convergence::sup(&[a.clone(), b]).unwrap();
        for f in Functor::REFLECTORS {
            prop_assert!(f.apply(&finer).is_finer_than(&f.apply(&a)), "{} is not isotone", f.name());
        }
    }

    #[test]
    fn sup_and_inf_are_bounds((a, b) in pair()) {
        let sup = Convergence::sup(&[a.clone(), b.clone()]).unwrap();
        let inf = Convergence::inf(&[a.clone(), b.clone()]).unwrap();
        prop_assert!(sup.is_finer_than(&a) && sup.is_finer_than(&b));
        prop_assert!(a.is_finer_than(&inf) && b.is_finer_than(&inf));
        prop_assert_eq!(Convergence::sup(&[a.clone(), a.clone()]).unwrap(), a.clone());
        prop_assert_eq!(Convergence::sup(&[a.clone(), inf.clone()]).unwrap(), a);
        prop_assert_eq!(Convergence::inf(&[b.clone(), sup]).unwrap(), b);
    }

    #[test]
    fn closure_routes_agree(c in any_convergence()) {
        let t = topologize(&c);
        for a in c.carrier().subsets() {
            let cl = t.closure(a);
            prop_assert_eq!(t.closure_by_adherence(a), t.closure_by_opens(a));
            prop_assert!(a.is_subset_of(cl));
            prop_assert_eq!(t.closure(cl), cl);
            prop_assert!(c.adh_set(a).is_subset_of(cl));
        }
    }

    #[test]
    fn json_round_trip(c in any_convergence()) {
        let text = to_pretty(&convergence_json(&c));
        prop_assert_eq!(parse_convergence(&text).unwrap(), c);
    }

    #[test]
    fn final_maps_are_continuous_quotients((c, images, k) in with_surjection()) {
        let f = CarrierMap::new(c.carrier().clone(), points(k), images).unwrap();
        let tau = final_convergence(&f, &c).unwrap();
        let ctx = MapContext::new(f, c, tau).unwrap();
        let r = ctx.classify().unwrap();
        prop_assert!(r.continuous && r.quotient);
        prop_assert_eq!(r.broken_implication(), None);
        for class in FilterClass::ALL {
            let routes = ctx.continuity_clauses(class);
            prop_assert!(routes.iter().all(|&b| b));
            let q = ctx.quotient_by_adherence(class).unwrap();
            prop_assert_eq!(ctx.quotient_by_reflector(class).unwrap(), q);
            prop_assert_eq!(ctx.quotient_by_covers(class).unwrap(), q);
            let p = ctx.perfect_by_adherence(class).unwrap();
            prop_assert_eq!(ctx.perfect_by_covers(class).unwrap(), p);
        }
    }

    #[test]
    fn classification_implications_hold(((c, images, _), t) in with_surjection().prop_flat_map(|s| {
        let k = s.2;
        (Just(s), convergence(k))
    })) {
        let f = CarrierMap::new(c.carrier().clone(), t.carrier().clone(), images).unwrap();
        let ctx = MapContext::new(f, c, t).unwrap();
        let r = ctx.classify().unwrap();
        prop_assert_eq!(r.broken_implication(), None);
    }
}
