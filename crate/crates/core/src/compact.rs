//! Compactness of families and relations, and the characteristic convergence.

use crate::convergence::Convergence;
use crate::error::{Error, Result};
use crate::family::{mesh_slices, same_carrier, FiniteRelation, SetFamily, Subset};
use crate::functor::{reflect, FilterClass};

/// Every class filter meshing `a` has an adherence meshing `b`.
pub fn is_compact_at(conv: &Convergence, a: &SetFamily, b: &SetFamily, class: FilterClass) -> Result<bool> {
    same_carrier(conv.carrier(), a.carrier())?;
    same_carrier(conv.carrier(), b.carrier())?;
    Ok(class
        .bases(conv)
        .into_iter()
        .all(|f| !a.members().iter().all(|m| f.meets(*m)) || mesh_slices(&[conv.adh_set(f)], b.members())))
}

/// `↑K` is compact at the whole carrier for principal filters.
pub fn is_compactoid_set(conv: &Convergence, k: Subset) -> bool {
    conv.carrier()
        .nonempty_subsets()
        .all(|h| !h.meets(k) || !conv.adh_set(h).is_empty())
}

/// `↑H` is compact at the whole carrier for `class`.
pub fn is_compactoid(conv: &Convergence, h: Subset, class: FilterClass) -> bool {
    let full = conv.carrier().full();
    class
        .bases(conv)
        .into_iter()
        .all(|f| !f.meets(h) || conv.adh_set(f).meets(full))
}

/// For every `w ∈ lim_θ ↑A` and every class filter `↑J` meshing `↑R(A)`,
/// `R(w)` meets `adh_σ ↑J`. Closed classes refer to `σ`.
pub fn is_relation_compact(
    rel: &FiniteRelation,
    theta: &Convergence,
    sigma: &Convergence,
    class: FilterClass,
) -> Result<bool> {
    same_carrier(rel.source(), theta.carrier())?;
    same_carrier(rel.target(), sigma.carrier())?;
    let class_bases: Vec<(Subset, Subset)> = class.bases(sigma).into_iter().map(|j| (j, sigma.adh_set(j))).collect();
    for a in theta.carrier().nonempty_subsets() {
        let ra = rel.image(a);
        for w in theta.lim(a).points() {
            let rw = rel.at(w);
            for &(j, adh) in &class_bases {
                if j.meets(ra) && !rw.meets(adh) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `lim_χ ↑A` is the whole carrier when `lim_ξ ↑A` is nonempty, else `∅`.
pub fn characteristic(conv: &Convergence) -> Convergence {
    let full = conv.carrier().full();
    Convergence::from_fn(conv.carrier().clone(), |a| {
        if conv.lim(a).is_empty() {
            Subset::EMPTY
        } else {
            full
        }
    })
    .expect("characteristic tables satisfy both axioms")
}

/// `↑H` is compactoid, decided through `lim_{J(χ_ξ)} ↑H ≠ ∅`.
pub fn compactoid_by_characteristic(conv: &Convergence, h: Subset, class: FilterClass) -> bool {
    !reflect(class, &characteristic(conv)).lim(h).is_empty()
}

/// If `rel` is compact and `a` is compact at `{b}`, then `R[a]` is compact
/// at `{R(b)}`. Returns a description of the failing instance, if any.
pub fn image_of_compact(
    rel: &FiniteRelation,
    theta: &Convergence,
    sigma: &Convergence,
    a: &SetFamily,
    b: Subset,
    class: FilterClass,
) -> Result<Option<String>> {
    if class == FilterClass::ClosedPrincipal {
        return Err(Error::NotTransferable(class.tag().into()));
    }
    let hyp_rel = is_relation_compact(rel, theta, sigma, class)?;
    let at = SetFamily::single(theta.carrier().clone(), b);
    let hyp_fam = is_compact_at(theta, a, &at, class)?;
    if !(hyp_rel && hyp_fam) {
        return Ok(None);
    }
    let image = a.image(rel)?;
    let image_at = SetFamily::single(sigma.carrier().clone(), rel.image(b));
    if is_compact_at(sigma, &image, &image_at, class)? {
        Ok(None)
    } else {
        Ok(Some(format!(
            "R{} is not compact at {}",
            image.format(),
            sigma.carrier().format(rel.image(b))
        )))
    }
}

/// On a finite carrier every non-degenerate filter has a nonempty
/// adherence, so the completeness number is 0. The compactness is checked,
/// not assumed.
pub fn completeness_number_finite(conv: &Convergence) -> Result<usize> {
    match conv.carrier().nonempty_subsets().find(|&h| conv.adh_set(h).is_empty()) {
        None => Ok(0),
        Some(h) => Err(Error::Disagreement(format!(
            "filter {} has empty adherence",
            conv.carrier().format(h)
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Carrier;

    #[test]
    fn sierpinski_point_is_compact_not_closed() {
        let s = Convergence::sierpinski();
        let zero = SetFamily::single(s.carrier().clone(), Subset::singleton(0));
        for class in FilterClass::ALL {
            assert!(is_compact_at(&s, &zero, &zero, class).unwrap());
        }
        assert!(!s.is_closed(Subset::singleton(0)));
    }

    #[test]
    fn characteristic_of_discrete() {
        let d = Convergence::discrete(Carrier::with_size(3).unwrap());
        let chi = characteristic(&d);
        for a in d.carrier().nonempty_subsets() {
            let expected = if a.len() == 1 {
                d.carrier().full()
            } else {
                Subset::EMPTY
            };
            assert_eq!(chi.lim(a), expected);
        }
    }

    #[test]
    fn completeness_is_zero() {
        assert_eq!(completeness_number_finite(&Convergence::p3()).unwrap(), 0);
        let d = Convergence::discrete(Carrier::with_size(3).unwrap());
        assert_eq!(completeness_number_finite(&d).unwrap(), 0);
    }

    #[test]
    fn identity_relation_is_compact() {
        let p = Convergence::p3();
        let id = FiniteRelation::identity(p.carrier().clone());
        for class in FilterClass::ALL {
            assert!(is_relation_compact(&id, &p, &p, class).unwrap());
        }
    }
}
