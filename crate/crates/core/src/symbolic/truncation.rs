//! Finite truncation oracle for the symbolic layer.
//!
//! `T_k` keeps `x_inf` and the positions `(r, p)` with `r, p < k` (only row 0
//! on PRIME). Within `T_k`, "finite" means "inside `T_{k-1}`" and a set is
//! infinite when it reaches the outer shell `T_k ∖ T_{k-1}`. For sets whose
//! constants stay below `k - 2` this reading is exact, which is the
//! stability bound every decision declares.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::exemplar::{fan_is_open, fan_vicinity};
use super::filter::SymbolicFilter;
use super::set::{Exemplar, Point, RowSet, SymbolicSet};
use crate::error::Result;

pub const MAX_TRUNCATION: u64 = 6;

#[derive(Clone, Copy, Debug)]
pub struct Truncation {
    carrier: Exemplar,
    k: u64,
}

impl Truncation {
    pub fn new(carrier: Exemplar, k: u64) -> Self {
        assert!((1..=MAX_TRUNCATION).contains(&k), "truncation depth {k} out of range");
        Truncation { carrier, k }
    }

    fn rows(&self) -> u64 {
        match self.carrier {
            Exemplar::Fan => self.k,
            Exemplar::Prime => 1,
        }
    }

    pub fn points(&self) -> Vec<Point> {
        let mut out = vec![Point::Infinity];
        for r in 0..self.rows() {
            out.extend((0..self.k).map(|p| Point::at(r, p)));
        }
        out
    }

    fn bit(&self, p: Point) -> u64 {
        match p {
            Point::Infinity => 1,
            Point::At { row, pos } => 1 << (1 + row * self.k + pos),
        }
    }

    pub fn all(&self) -> u64 {
        self.points().into_iter().fold(0, |m, p| m | self.bit(p))
    }

    /// The part standing for a finite set: `T_{k-1}` inside `T_k`.
    pub fn inner(&self) -> u64 {
        self.points()
            .into_iter()
            .filter(|p| match p {
                Point::Infinity => true,
                Point::At { row, pos } => *pos + 1 < self.k && (self.carrier == Exemplar::Prime || *row + 1 < self.k),
            })
            .fold(0, |m, p| m | self.bit(p))
    }

    pub fn shell(&self) -> u64 {
        self.all() & !self.inner()
    }

    pub fn mask(&self, s: &SymbolicSet) -> u64 {
        self.points()
            .into_iter()
            .filter(|p| s.contains(*p))
            .fold(0, |m, p| m | self.bit(p))
    }

    pub fn is_infinite(&self, bits: u64) -> bool {
        bits & self.shell() != 0
    }

    /// `F ∈ (B/A)₀`: `A ⊆ F` and `B ∖ F` finite.
    pub fn filter_contains(&self, b: u64, a: u64, f: u64) -> bool {
        a & !f == 0 && !self.is_infinite(b & !f)
    }

    /// The least member, removing every finite part of `B ∖ A`.
    pub fn least_member(&self, b: u64, a: u64) -> u64 {
        a | (b & !self.inner())
    }

    fn pair(&self, f: &SymbolicFilter) -> (u64, u64) {
        (self.mask(f.base_set()), self.mask(f.center()))
    }

    pub fn contains(&self, f: &SymbolicFilter, s: &SymbolicSet) -> bool {
        let (b, a) = self.pair(f);
        self.filter_contains(b, a, self.mask(s))
    }

    pub fn is_coarser(&self, f: &SymbolicFilter, g: &SymbolicFilter) -> bool {
        let (fb, fa) = self.pair(f);
        let (gb, ga) = self.pair(g);
        self.filter_contains(gb, ga, self.least_member(fb, fa))
    }

    pub fn meshes(&self, f: &SymbolicFilter, g: &SymbolicFilter) -> bool {
        let (fb, fa) = self.pair(f);
        let (gb, ga) = self.pair(g);
        self.least_member(fb, fa) & self.least_member(gb, ga) != 0
    }

    pub fn is_degenerate(&self, f: &SymbolicFilter) -> bool {
        let (b, a) = self.pair(f);
        self.least_member(b, a) == 0
    }

    /// The FAN pretopology read inside `T_k`: `O` is open iff `O ∈ V(x)` for
    /// every `x ∈ O`. Points of the last row are skipped, since their
    /// vicinities name the row that stands for all remaining rows; row
    /// `k - 2` already represents them within the stability bound.
    pub fn fan_is_open(&self, o: &SymbolicSet) -> bool {
        let bits = self.mask(o);
        self.points()
            .into_iter()
            .filter(|p| bits & self.bit(*p) != 0)
            .filter(|p| !matches!(p, Point::At { row, .. } if row + 1 == self.k))
            .all(|p| {
                let (b, a) = self.pair(&fan_vicinity(p));
                self.filter_contains(b, a, bits)
            })
    }
}

/// Random representable set with constants below `bound`.
pub fn random_set(rng: &mut impl Rng, carrier: Exemplar, bound: u64) -> SymbolicSet {
    let row_set = |rng: &mut dyn rand::RngCore| {
        let listed: Vec<u64> = (0..bound).filter(|_| rng.gen_bool(0.4)).collect();
        if rng.gen_bool(0.5) {
            RowSet::cofinite(listed)
        } else {
            RowSet::finite(listed)
        }
    };
    let infinity = rng.gen_bool(0.5);
    match carrier {
        Exemplar::Fan => {
            let default = if rng.gen_bool(0.3) {
                RowSet::empty()
            } else {
                row_set(rng)
            };
            let mut set = SymbolicSet::empty(carrier)
                .with_infinity(infinity)
                .with_default(default);
            for r in 0..bound {
                if rng.gen_bool(0.5) {
                    set = set.with_row(r, row_set(rng));
                }
            }
            set
        }
        Exemplar::Prime => SymbolicSet::empty(carrier)
            .with_infinity(infinity)
            .with_row(0, row_set(rng)),
    }
}

/// Random cofinite filter built from two random sets.
pub fn random_filter(rng: &mut impl Rng, carrier: Exemplar, bound: u64) -> SymbolicFilter {
    let b = random_set(rng, carrier, bound);
    let a = b.intersection(&random_set(rng, carrier, bound)).expect("same carrier");
    SymbolicFilter::cofinite(b, a).expect("center inside base")
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CrossCheckReport {
    pub carrier: String,
    pub samples: usize,
    pub comparisons: usize,
    pub mismatches: Vec<String>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Constants stay below this so that truncations `k ∈ 4..=6` are stable.
/// Set algebra is checked at every `k`, being pointwise.
pub const SAMPLE_BOUND: u64 = 2;

fn check_one(carrier: Exemplar, seed: u64) -> Result<(usize, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_set(&mut rng, carrier, SAMPLE_BOUND);
    let t = random_set(&mut rng, carrier, SAMPLE_BOUND);
    let f = random_filter(&mut rng, carrier, SAMPLE_BOUND);
    let g = random_filter(&mut rng, carrier, SAMPLE_BOUND);
    let union = s.union(&t)?;
    let inter = s.intersection(&t)?;
    let comp = s.complement();
    let meet = f.meet(&g)?;
    let join = f.join(&g)?;
    let (free, principal) = f.decompose()?;

    let mut count = 0;
    let mut bad = Vec::new();
    let mut expect = |what: &str, k: u64, symbolic: bool, oracle: bool| {
        count += 1;
        if symbolic != oracle {
            bad.push(format!(
                "{what} at k={k} (seed {seed}): symbolic {symbolic}, truncation {oracle}; S={s} T={t} f={f} g={g}"
            ));
        }
    };
    for k in 1..=MAX_TRUNCATION {
        let tr = Truncation::new(carrier, k);
        let (ms, mt) = (tr.mask(&s), tr.mask(&t));
        expect("union", k, tr.mask(&union) == ms | mt, true);
        expect("intersection", k, tr.mask(&inter) == ms & mt, true);
        expect("complement", k, tr.mask(&comp) == tr.all() & !ms, true);
    }
    let stable = s
        .stability_bound()
        .max(t.stability_bound())
        .max(f.base_set().stability_bound())
        .max(f.center().stability_bound())
        .max(g.base_set().stability_bound())
        .max(g.center().stability_bound());
    for k in stable..=MAX_TRUNCATION {
        let tr = Truncation::new(carrier, k);
        expect("infinite", k, s.is_infinite(), tr.is_infinite(tr.mask(&s)));
        expect("subset", k, s.is_subset_of(&t)?, tr.mask(&s) & !tr.mask(&t) == 0);
        expect("contains", k, f.contains(&s)?, tr.contains(&f, &s));
        expect("mesh", k, f.meshes(&g)?, tr.meshes(&f, &g));
        expect("coarser", k, f.is_coarser_than(&g)?, tr.is_coarser(&f, &g));
        expect("degenerate", k, f.is_degenerate(), tr.is_degenerate(&f));
        for h in [&f, &g] {
            expect("meet below", k, meet.is_coarser_than(h)?, tr.is_coarser(&meet, h));
            expect("join above", k, h.is_coarser_than(&join)?, tr.is_coarser(h, &join));
        }
        for x in [&s, &t] {
            let both = f.contains(x)? && g.contains(x)?;
            expect(
                "meet members",
                k,
                meet.contains(x)?,
                tr.contains(&f, x) && tr.contains(&g, x),
            );
            expect("meet members agree", k, meet.contains(x)?, both);
            let split = free.contains(x)? && principal.contains(x)?;
            expect("decomposition", k, f.contains(x)?, split);
        }
        expect("decomposition join", k, free.join(&principal)?.is_degenerate(), true);
        if carrier == Exemplar::Fan {
            expect("open", k, fan_is_open(&s), tr.fan_is_open(&s));
        }
    }
    Ok((count, bad))
}

/// Symbolic decisions against bit-vector truncations, on `samples` random
/// instances. Samples run in parallel.
pub fn cross_check(carrier: Exemplar, samples: usize, seed: u64) -> Result<CrossCheckReport> {
    let results: Vec<(usize, Vec<String>)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| check_one(carrier, seed.wrapping_add(i)))
        .collect::<Result<_>>()?;
    let mut report = CrossCheckReport {
        carrier: carrier.name().into(),
        samples,
        ..Default::default()
    };
    for (count, bad) in results {
        report.comparisons += count;
        report.mismatches.extend(bad);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_detects_infinite_sets() {
        let tr = Truncation::new(Exemplar::Fan, 4);
        assert!(tr.is_infinite(tr.mask(&SymbolicSet::x_infinity())));
        assert!(tr.is_infinite(tr.mask(&SymbolicSet::row(Exemplar::Fan, 1))));
        let finite = SymbolicSet::finite(Exemplar::Fan, [Point::Infinity, Point::at(2, 2)]);
        assert!(!tr.is_infinite(tr.mask(&finite)));
    }

    #[test]
    fn fan_truncations_agree() {
        let r = cross_check(Exemplar::Fan, 300, 7).unwrap();
        assert!(r.passed(), "{:?}", &r.mismatches[..r.mismatches.len().min(3)]);
        assert!(r.comparisons > 300 * 18);
    }

    #[test]
    fn prime_truncations_agree() {
        let r = cross_check(Exemplar::Prime, 300, 11).unwrap();
        assert!(r.passed(), "{:?}", &r.mismatches[..r.mismatches.len().min(3)]);
    }
}
