//! Left derived functors of a composable pair and the comparison
//! `E′_{g∘f} → E′|_{0,2}`.

use super::left::{left_derived, DerivedResult};
use super::{agree_up_to_localization, comparison, factor_through, DeriveOptions};
use crate::category::{Mor, Obj};
use crate::correspondence::{check_flat_over_triangle, find_iso_fixing_fibers, grothendieck_chain, grothendieck_cocart, Correspondence};
use crate::error::DerivedError;
use crate::functor::{check_equivalence, FunctorData};
use crate::localization::{localize_correspondence, marking_from_fibers, LocalizedCorrespondence};
use crate::marking::Marking;

#[derive(Clone, Debug)]
pub struct CompositionReport {
    pub flat_before: bool,
    pub flat_after: bool,
    pub localized: LocalizedCorrespondence,
    pub left_f: DerivedResult,
    pub left_g: DerivedResult,
    pub left_gf: DerivedResult,
    /// `E′_{g∘f} → E′|_{0,2}`.
    pub comparison: FunctorData,
    pub comparison_is_equivalence: bool,
    /// `𝐋g ∘ 𝐋f ≅ 𝐋(g∘f)`, when all three exist.
    pub composite_agrees: Option<bool>,
}

/// Objects and morphisms of the levels `{0, 2}` of `x`, in restriction
/// order.
fn outer_levels(x: &Correspondence) -> (Vec<Obj>, Vec<Mor>) {
    let objects: Vec<Obj> = x.total().objects().filter(|&o| x.degree(o) != 1).collect();
    let (_, kept) = x.total().full_subcategory(&objects);
    (objects, kept)
}

fn position<T: PartialEq>(list: &[T], item: T) -> usize {
    list.iter().position(|k| *k == item).expect("kept by the restriction")
}

/// `𝐋g ∘ 𝐋f` transported along the identification of the middle
/// localizations.
fn composite(lf: &DerivedResult, lg: &DerivedResult) -> Option<FunctorData> {
    let (f, g) = (lf.derived.as_ref()?, lg.derived.as_ref()?);
    let phi = comparison(&lf.q_d, &lg.q_c)?;
    Some(f.then_unchecked(&phi).then_unchecked(g))
}

pub fn derive_pair_composition(
    f: &FunctorData,
    g: &FunctorData,
    markings: [&Marking; 3],
    opts: DeriveOptions,
) -> Result<CompositionReport, DerivedError> {
    let [w0, w1, w2] = markings;
    let x = grothendieck_chain(&[f.clone(), g.clone()])?;
    let flat_before = check_flat_over_triangle(&x)?;
    let w = marking_from_fibers(&x, &[w0.clone(), w1.clone(), w2.clone()]);
    let localized = localize_correspondence(&x, &w, opts.depth)?;
    let flat_after = check_flat_over_triangle(&localized.correspondence)?;
    let gf = f.then(g)?;
    let left_f = left_derived(f, w0, w1, opts)?;
    let left_g = left_derived(g, w1, w2, opts)?;
    let left_gf = left_derived(&gf, w0, w2, opts)?;

    let e = grothendieck_cocart(&gf);
    let outer = x.restrict(&[0, 2])?;
    let alpha = find_iso_fixing_fibers(&e, &outer)
        .ok_or_else(|| DerivedError::InternalContradiction("E_{g∘f} differs from the outer levels".into()))?;
    let (ox, kx) = outer_levels(&x);
    let l = &localized.correspondence;
    let (ol, kl) = outer_levels(l);
    let restricted = l.restrict(&[0, 2])?;
    let obj_map = e.total().objects().map(|o| position(&ol, localized.q.obj(ox[alpha.obj(o)]))).collect();
    let mor_map = e.total().morphisms().map(|m| position(&kl, localized.q.mor(kx[alpha.mor(m)]))).collect();
    let h = FunctorData::new(e.total().clone(), restricted.total().clone(), obj_map, mor_map)?;
    let kappa = factor_through(&left_gf.localized.q, &h)
        .ok_or_else(|| DerivedError::InternalContradiction("comparison does not factor through E′_{g∘f}".into()))?;
    let comparison_is_equivalence = check_equivalence(&kappa).is_some();

    let composite_agrees = match (composite(&left_f, &left_g), left_gf.derived.as_ref()) {
        (Some(c), Some(d)) => Some(agree_up_to_localization(&c, (&left_f.q_c, &left_g.q_d), d, (&left_gf.q_c, &left_gf.q_d))),
        _ => None,
    };
    if comparison_is_equivalence && composite_agrees == Some(false) {
        return Err(DerivedError::InternalContradiction("comparison is an equivalence but 𝐋g∘𝐋f ≇ 𝐋(g∘f)".into()));
    }
    Ok(CompositionReport {
        flat_before,
        flat_after,
        localized,
        left_f,
        left_g,
        left_gf,
        comparison: kappa,
        comparison_is_equivalence,
        composite_agrees,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog;
    use crate::marking::saturate_marking;
    use crate::natural::find_natural_iso;

    #[test]
    fn nothing_inverted() {
        let c = Arc::new(catalog::cospan());
        let a = Arc::new(catalog::arrow());
        let f = crate::functor::all_functors(&c, &a).into_iter().find(|f| f.obj_map() == [0, 0, 1]).unwrap();
        let g = FunctorData::identity(a.clone());
        let (w0, w1) = (Marking::isos(c), Marking::isos(a.clone()));
        let r = derive_pair_composition(&f, &g, [&w0, &w1, &w1], DeriveOptions::default()).unwrap();
        assert!(r.flat_before && r.flat_after);
        assert!(r.comparison_is_equivalence);
        assert_eq!(r.composite_agrees, Some(true));
        let lgf = r.left_gf.derived.unwrap();
        assert!(find_natural_iso(&r.left_gf.q_c.then(&lgf).unwrap(), &f.then(&r.left_gf.q_d).unwrap()).is_some());
    }

    #[test]
    fn preserving_pair() {
        let a = Arc::new(catalog::arrow());
        let id = FunctorData::identity(a.clone());
        let w = saturate_marking(a, [1]);
        let r = derive_pair_composition(&id, &id, [&w, &w, &w], DeriveOptions::default()).unwrap();
        assert!(r.comparison_is_equivalence);
        assert_eq!(r.composite_agrees, Some(true));
    }

    #[test]
    fn inverted_ends_report_a_verdict() {
        let a = Arc::new(catalog::arrow());
        let id = FunctorData::identity(a.clone());
        let (w, ids) = (saturate_marking(a.clone(), [1]), Marking::isos(a));
        let r = derive_pair_composition(&id, &id, [&w, &ids, &w], DeriveOptions::default()).unwrap();
        assert!(r.left_f.exists());
        assert!(r.flat_before);
        // the verdict is recorded, not predicted
        assert!(!r.comparison_is_equivalence || r.composite_agrees != Some(false));
    }
}
