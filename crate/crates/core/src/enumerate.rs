//! Exhaustive generation of convergences and maps on small carriers, and
//! predicate-driven witness search.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convergence::Convergence;
use crate::error::{Error, Result};
use crate::family::{Carrier, CarrierMap, Subset};
use crate::functor::{is_pseudotopology, is_topology, FilterClass};
use crate::maps::MapContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConvClass {
    Convergence,
    Pseudotopology,
    Pretopology,
    Topology,
}

impl ConvClass {
    pub fn name(self) -> &'static str {
        match self {
            ConvClass::Convergence => "convergence",
            ConvClass::Pseudotopology => "pseudotopology",
            ConvClass::Pretopology => "pretopology",
            ConvClass::Topology => "topology",
        }
    }

    /// Largest carrier enumerated exhaustively.
    pub fn cap(self) -> usize {
        match self {
            ConvClass::Convergence | ConvClass::Pseudotopology => 3,
            ConvClass::Pretopology | ConvClass::Topology => 4,
        }
    }
}

impl fmt::Display for ConvClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConvClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            ConvClass::Convergence,
            ConvClass::Pseudotopology,
            ConvClass::Pretopology,
            ConvClass::Topology,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| Error::Document(format!("unknown convergence class {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sample {
    pub seed: u64,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub size: usize,
    pub class: ConvClass,
    pub sample: Option<Sample>,
}

impl EnumerationSpec {
    pub fn new(size: usize, class: ConvClass) -> Self {
        EnumerationSpec {
            size,
            class,
            sample: None,
        }
    }
}

pub fn carrier(n: usize) -> Arc<Carrier> {
    static CARRIERS: OnceLock<Vec<Arc<Carrier>>> = OnceLock::new();
    CARRIERS.get_or_init(|| {
        (1..=crate::family::MAX_POINTS)
            .map(|n| Carrier::with_size(n).expect("within cap"))
            .collect()
    })[n - 1]
        .clone()
}

/// The families `{A ≠ ∅ : x ∈ lim ↑A}` allowed for point `x`: they contain
/// `{x}` and are closed under nonempty subsets. Encoded as masks over subset
/// indices, in increasing mask order.
pub fn point_downsets(n: usize, x: usize) -> Vec<u64> {
    assert!(n <= 3, "downset enumeration is capped at 3 points");
    let sets = (1usize << n) - 1;
    let mut out = Vec::new();
    for code in 0u64..1 << sets {
        let mask = code << 1;
        if mask >> (1 << x) & 1 == 0 {
            continue;
        }
        let closed = (1..=sets).filter(|a| mask >> a & 1 == 1).all(|a| {
            Subset::from_bits(a as u32)
                .subsets()
                .all(|b| b.is_empty() || mask >> b.index() & 1 == 1)
        });
        if closed {
            out.push(mask);
        }
    }
    out
}

fn from_downsets(c: &Arc<Carrier>, masks: &[u64]) -> Convergence {
    let lim = c
        .subsets()
        .map(|a| {
            let bits = masks
                .iter()
                .enumerate()
                .filter(|(_, m)| !a.is_empty() && *m >> a.index() & 1 == 1)
                .fold(0u32, |acc, (x, _)| acc | 1 << x);
            Subset::from_bits(bits)
        })
        .collect();
    Convergence::from_table_unchecked(c.clone(), lim)
}

/// Mixed-radix product; point 0 varies slowest.
fn product_indices(radices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = radices.iter().product();
    (0..total).map(move |mut i| {
        let mut digits = vec![0; radices.len()];
        for (d, &r) in digits.iter_mut().zip(radices).rev() {
            *d = i % r;
            i /= r;
        }
        digits
    })
}

fn all_convergences(n: usize) -> Vec<Convergence> {
    let c = carrier(n);
    let per_point: Vec<Vec<u64>> = (0..n).map(|x| point_downsets(n, x)).collect();
    let radices: Vec<usize> = per_point.iter().map(Vec::len).collect();
    product_indices(&radices)
        .map(|digits| {
            let masks: Vec<u64> = digits.iter().enumerate().map(|(x, &d)| per_point[x][d]).collect();
            from_downsets(&c, &masks)
        })
        .collect()
}

fn all_pretopologies(n: usize) -> Vec<Convergence> {
    let c = carrier(n);
    let options: Vec<Vec<Subset>> = (0..n)
        .map(|x| c.subsets().filter(|v| v.contains(x)).collect::<Vec<_>>())
        .collect();
    let radices: Vec<usize> = options.iter().map(Vec::len).collect();
    product_indices(&radices)
        .map(|digits| {
            let v: Vec<Subset> = digits.iter().enumerate().map(|(x, &d)| options[x][d]).collect();
            Convergence::from_vicinities(c.clone(), &v).expect("vicinities contain their point")
        })
        .collect()
}

/// All convergences on `n ≤ 3` points, cached.
pub fn universe(n: usize) -> &'static [Convergence] {
    static CACHE: [OnceLock<Vec<Convergence>>; 4] = [const { OnceLock::new() }; 4];
    assert!((1..=3).contains(&n), "the convergence universe is capped at 3 points");
    CACHE[n].get_or_init(|| all_convergences(n))
}

/// One index per orbit of the relabeling action on [`universe`], the least
/// index of its orbit, in increasing order. Cached.
pub fn orbit_representatives(n: usize) -> &'static [usize] {
    static CACHE: [OnceLock<Vec<usize>>; 4] = [const { OnceLock::new() }; 4];
    CACHE[n].get_or_init(|| {
        let convs = universe(n);
        let index: HashMap<&Convergence, usize> = convs.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let perms = surjections(n, n);
        (0..convs.len())
            .into_par_iter()
            .filter(|&i| {
                perms.iter().all(|pi| {
                    let moved = crate::maps::final_convergence(pi, &convs[i]).expect("bijection");
                    index[&moved] >= i
                })
            })
            .collect()
    })
}

pub fn enumerate(spec: &EnumerationSpec) -> Result<Vec<Convergence>> {
    if spec.size == 0 {
        return Err(Error::EmptyCarrier);
    }
    if let Some(sample) = spec.sample {
        return sample_convergences(spec.size, spec.class, sample);
    }
    if spec.size > spec.class.cap() {
        return Err(Error::EnumerationCap {
            class: spec.class.name().into(),
            size: spec.size,
            cap: spec.class.cap(),
        });
    }
    let n = spec.size;
    Ok(match spec.class {
        ConvClass::Convergence => universe(n).to_vec(),
        ConvClass::Pseudotopology => universe(n).iter().filter(|c| is_pseudotopology(c)).cloned().collect(),
        ConvClass::Pretopology => all_pretopologies(n),
        ConvClass::Topology => all_pretopologies(n).into_iter().filter(is_topology).collect(),
    })
}

/// Random members of a class. Pretopologies (and, by the finite collapse,
/// pseudotopologies) draw uniform vicinities; topologies topologize a random
/// pretopology; convergences draw per-point generated downsets.
pub fn sample_convergences(n: usize, class: ConvClass, sample: Sample) -> Result<Vec<Convergence>> {
    let c = Carrier::with_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(sample.seed);
    let full = c.full().bits();
    let mut out = Vec::with_capacity(sample.count);
    for _ in 0..sample.count {
        let conv = match class {
            ConvClass::Convergence => {
                let masks: Vec<Vec<Subset>> = (0..n)
                    .map(|x| {
                        let k = rng.gen_range(0..=3);
                        let mut gens = vec![Subset::singleton(x)];
                        for _ in 0..k {
                            let bits = rng.gen_range(1..=full);
                            gens.push(Subset::from_bits(bits));
                        }
                        gens
                    })
                    .collect();
                Convergence::from_fn(c.clone(), |a| {
                    let bits = masks
                        .iter()
                        .enumerate()
                        .filter(|(_, g)| g.iter().any(|s| a.is_subset_of(*s)))
                        .fold(0, |acc, (x, _)| acc | 1 << x);
                    Subset::from_bits(bits)
                })?
            }
            ConvClass::Pretopology | ConvClass::Pseudotopology | ConvClass::Topology => {
                let v: Vec<Subset> = (0..n)
                    .map(|x| Subset::from_bits(rng.gen_range(0..=full) | 1 << x))
                    .collect();
                let p = Convergence::from_vicinities(c.clone(), &v)?;
                if class == ConvClass::Topology {
                    crate::functor::topologize(&p)
                } else {
                    p
                }
            }
        };
        out.push(conv);
    }
    Ok(out)
}

/// Open-set systems on `n` points (containing `∅` and the carrier, closed
/// under unions and intersections), found by scanning every family.
pub fn topologies_by_open_sets(n: usize) -> Vec<Vec<Subset>> {
    assert!(n <= 4, "open-set enumeration is capped at 4 points");
    let subsets = 1usize << n;
    let full = subsets - 1;
    let mut out = Vec::new();
    for code in 0u64..1 << subsets {
        if code & 1 == 0 || code >> full & 1 == 0 {
            continue;
        }
        let members: Vec<usize> = (0..subsets).filter(|s| code >> s & 1 == 1).collect();
        let closed = members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| code >> (a | b) & 1 == 1 && code >> (a & b) & 1 == 1)
        });
        if closed {
            out.push(members.into_iter().map(|s| Subset::from_bits(s as u32)).collect());
        }
    }
    out
}

/// All maps from `m` points to `n` points in lexicographic order of the
/// image vector.
pub fn maps(m: usize, n: usize) -> Vec<CarrierMap> {
    let (src, tgt) = (carrier(m), carrier(n));
    product_indices(&vec![n; m])
        .map(|images| CarrierMap::new(src.clone(), tgt.clone(), images).expect("total map"))
        .collect()
}

pub fn surjections(m: usize, n: usize) -> Vec<CarrierMap> {
    maps(m, n).into_iter().filter(CarrierMap::is_surjective).collect()
}

/// A registered search predicate over `(f, ξ, τ)`.
pub struct Predicate {
    pub name: &'static str,
    pub description: &'static str,
    /// When false, `τ` is taken to be `fξ` instead of ranging over the universe.
    pub uses_target: bool,
    pub test: fn(&MapContext) -> Result<bool>,
}

fn q(ctx: &MapContext, c: FilterClass) -> Result<bool> {
    ctx.is_quotient_like(c)
}

fn p(ctx: &MapContext, c: FilterClass) -> Result<bool> {
    ctx.is_perfect_like(c)
}

use FilterClass::{All, ClosedPrincipal, CountablyBased, Principal};

pub const PREDICATES: &[Predicate] = &[
    Predicate {
        name: "quotient-not-hereditarily-quotient",
        description: "quotient but not hereditarily quotient",
        uses_target: true,
        test: |c| Ok(q(c, ClosedPrincipal)? && !q(c, Principal)?),
    },
    Predicate {
        name: "topology-final-not-topology",
        description: "the source is a topology but the final convergence is not",
        uses_target: false,
        test: |c| Ok(is_topology(&c.xi) && !is_topology(&c.tau)),
    },
    Predicate {
        name: "perfect-not-closed",
        description: "perfect but not closed",
        uses_target: true,
        test: |c| Ok(p(c, All)? && !p(c, ClosedPrincipal)?),
    },
    Predicate {
        name: "almost-open-not-open",
        description: "almost open but not open",
        uses_target: true,
        test: |c| Ok(c.is_almost_open()? && !c.is_open_map()?),
    },
    Predicate {
        name: "biquotient-not-almost-open",
        description: "biquotient but not almost open",
        uses_target: true,
        test: |c| Ok(q(c, All)? && !c.is_almost_open()?),
    },
    Predicate {
        name: "hereditarily-quotient-not-biquotient",
        description: "hereditarily quotient but not biquotient",
        uses_target: true,
        test: |c| Ok(q(c, Principal)? && !q(c, All)?),
    },
    Predicate {
        name: "hereditarily-quotient-not-countably-biquotient",
        description: "hereditarily quotient but not countably biquotient",
        uses_target: true,
        test: |c| Ok(q(c, Principal)? && !q(c, CountablyBased)?),
    },
    Predicate {
        name: "countably-biquotient-not-biquotient",
        description: "countably biquotient but not biquotient",
        uses_target: true,
        test: |c| Ok(q(c, CountablyBased)? && !q(c, All)?),
    },
    Predicate {
        name: "closed-not-adherent",
        description: "closed but not adherent",
        uses_target: true,
        test: |c| Ok(p(c, ClosedPrincipal)? && !p(c, Principal)?),
    },
    Predicate {
        name: "adherent-not-countably-perfect",
        description: "adherent but not countably perfect",
        uses_target: true,
        test: |c| Ok(p(c, Principal)? && !p(c, CountablyBased)?),
    },
    Predicate {
        name: "adherent-not-perfect",
        description: "adherent but not perfect",
        uses_target: true,
        test: |c| Ok(p(c, Principal)? && !p(c, All)?),
    },
    Predicate {
        name: "countably-perfect-not-perfect",
        description: "countably perfect but not perfect",
        uses_target: true,
        test: |c| Ok(p(c, CountablyBased)? && !p(c, All)?),
    },
    Predicate {
        name: "biquotient-not-perfect",
        description: "biquotient but not perfect",
        uses_target: true,
        test: |c| Ok(q(c, All)? && !p(c, All)?),
    },
    Predicate {
        name: "countably-biquotient-not-countably-perfect",
        description: "countably biquotient but not countably perfect",
        uses_target: true,
        test: |c| Ok(q(c, CountablyBased)? && !p(c, CountablyBased)?),
    },
    Predicate {
        name: "hereditarily-quotient-not-adherent",
        description: "hereditarily quotient but not adherent",
        uses_target: true,
        test: |c| Ok(q(c, Principal)? && !p(c, Principal)?),
    },
    Predicate {
        name: "quotient-not-closed",
        description: "quotient but not closed",
        uses_target: true,
        test: |c| Ok(q(c, ClosedPrincipal)? && !p(c, ClosedPrincipal)?),
    },
    Predicate {
        name: "continuous-not-closed",
        description: "continuous but not closed: compactness is carried along, closedness is not",
        uses_target: true,
        test: |c| Ok(c.continuous() && !p(c, ClosedPrincipal)?),
    },
];

pub fn predicate(name: &str) -> Result<&'static Predicate> {
    PREDICATES
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPredicate(name.into()))
}

/// Carrier sizes `(source, target)` searched, in order.
pub const SEARCH_SIZES: [(usize, usize); 6] = [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)];

#[derive(Clone, Debug)]
pub struct SearchTask {
    pub predicate: &'static Predicate,
    pub sizes: Vec<(usize, usize)>,
}

impl SearchTask {
    pub fn new(name: &str) -> Result<Self> {
        Ok(SearchTask {
            predicate: predicate(name)?,
            sizes: SEARCH_SIZES.to_vec(),
        })
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Predicate").field("name", &self.name).finish()
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Witness {
        context: MapContext,
        /// Position in the search order: sizes, map, source, target.
        position: (usize, usize, usize, usize),
    },
    Exhausted {
        checked: usize,
    },
}

/// Maps and source indices visited for sizes `(m, n)`. Between equal
/// sizes every surjection is a bijection `π`, and `(π, ξ, τ)` is isomorphic
/// to `(id, πξ, τ)` and to its relabelings, so from three points on the
/// identity with one source per orbit stands for every triple up to
/// isomorphism. Smaller squares are visited in full.
pub fn search_space(m: usize, n: usize) -> (Vec<CarrierMap>, Vec<usize>) {
    if m == n && n >= 3 {
        (
            vec![CarrierMap::identity(carrier(n))],
            orbit_representatives(n).to_vec(),
        )
    } else {
        (surjections(m, n), (0..universe(m).len()).collect())
    }
}

/// The first `(f, ξ, τ)` in the canonical order satisfying the predicate,
/// or the number of triples checked.
pub fn search(task: &SearchTask) -> Result<SearchOutcome> {
    let mut checked = 0usize;
    for (si, &(m, n)) in task.sizes.iter().enumerate() {
        let sources = universe(m);
        let targets = universe(n);
        let (maps, source_indices) = search_space(m, n);
        for (mi, f) in maps.into_iter().enumerate() {
            let hit = source_indices
                .par_iter()
                .map(|&xi_i| -> Result<Option<(usize, usize, MapContext)>> {
                    let xi = &sources[xi_i];
                    if !task.predicate.uses_target {
                        let tau = crate::maps::final_convergence(&f, xi)?;
                        let ctx = MapContext::new(f.clone(), xi.clone(), tau)?;
                        return Ok((task.predicate.test)(&ctx)?.then_some((xi_i, 0, ctx)));
                    }
                    for (ti, tau) in targets.iter().enumerate() {
                        let ctx = MapContext::new(f.clone(), xi.clone(), tau.clone())?;
                        if (task.predicate.test)(&ctx)? {
                            return Ok(Some((xi_i, ti, ctx)));
                        }
                    }
                    Ok(None)
                })
                .find_map_first(|r| match r {
                    Ok(None) => None,
                    other => Some(other),
                });
            match hit {
                Some(Ok(Some((xi_i, ti, context)))) => {
                    return Ok(SearchOutcome::Witness {
                        context,
                        position: (si, mi, xi_i, ti),
                    });
                }
                Some(Err(e)) => return Err(e),
                _ => {}
            }
            checked += source_indices.len() * if task.predicate.uses_target { targets.len() } else { 1 };
        }
    }
    Ok(SearchOutcome::Exhausted { checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::is_pretopology;

    #[test]
    fn downset_counts() {
        assert_eq!(point_downsets(2, 0).len(), 3);
        assert_eq!(point_downsets(3, 1).len(), 14);
    }

    #[test]
    fn counts() {
        let count = |n, class| enumerate(&EnumerationSpec::new(n, class)).unwrap().len();
        assert_eq!(count(2, ConvClass::Convergence), 9);
        assert_eq!(count(2, ConvClass::Pretopology), 4);
        assert_eq!(count(3, ConvClass::Pretopology), 64);
        assert_eq!(count(3, ConvClass::Topology), 29);
        assert_eq!(count(3, ConvClass::Pseudotopology), 64);
        assert_eq!(topologies_by_open_sets(3).len(), 29);
        assert_eq!(count(3, ConvClass::Convergence), 2744);
    }

    #[test]
    fn caps_are_enforced() {
        let spec = EnumerationSpec::new(4, ConvClass::Convergence);
        assert!(matches!(enumerate(&spec), Err(Error::EnumerationCap { .. })));
        let spec = EnumerationSpec {
            sample: Some(Sample { seed: 1, count: 5 }),
            ..spec
        };
        assert_eq!(enumerate(&spec).unwrap().len(), 5);
    }

    #[test]
    fn surjection_counts() {
        assert_eq!(surjections(3, 2).len(), 6);
        assert_eq!(surjections(2, 2).len(), 2);
        assert_eq!(maps(3, 2).len(), 8);
    }

    #[test]
    fn unknown_predicate() {
        assert!(matches!(SearchTask::new("nope"), Err(Error::UnknownPredicate(_))));
    }

    #[test]
    fn pretopology_membership() {
        for c in enumerate(&EnumerationSpec::new(3, ConvClass::Pretopology)).unwrap() {
            assert!(is_pretopology(&c));
        }
    }
}
