//! Derived functors of weak-equivalence-preserving functors, and existence
//! through a resolving functor `i: C₀ → C`.

use std::collections::HashMap;

use super::left::{cocart_elements, left_derived, right_derived, DerivedResult, Status};
use super::{agree_up_to_localization, factor_through, right_kan_extension, DeriveOptions};
use crate::correspondence::grothendieck_cocart;
use crate::error::DerivedError;
use crate::functor::{check_equivalence, quasi_inverse, FunctorData};
use crate::localization::{localize, localize_correspondence, marking_from_fibers};
use crate::marking::Marking;
use crate::natural::{find_natural_iso, NatTrans};

fn require_agreement(
    derived: &FunctorData,
    qs: (&FunctorData, &FunctorData),
    other: &DerivedResult,
    what: &str,
) -> Result<(), DerivedError> {
    let Some(g) = other.derived.as_ref() else {
        return Err(DerivedError::InternalContradiction(format!("{what} derived functor does not exist")));
    };
    if !agree_up_to_localization(derived, qs, g, (&other.q_c, &other.q_d)) {
        return Err(DerivedError::InternalContradiction(format!("{what} derived functor disagrees")));
    }
    Ok(())
}

/// The functor induced on localizations by `f` with `f(W_C) ⊆ W_D`,
/// checked against both fibration routes.
pub fn derive_preserving(f: &FunctorData, w_c: &Marking, w_d: &Marking, opts: DeriveOptions) -> Result<DerivedResult, DerivedError> {
    if let Some(m) = w_c.carried_into(f, w_d) {
        return Err(DerivedError::NotPreserving(f.source().morphism_name(m).to_string()));
    }
    let (lc, ld) = (localize(w_c, opts.depth)?, localize(w_d, opts.depth)?);
    let (q_c, q_d) = (lc.q().clone(), ld.q().clone());
    let derived = lc.extend(&f.then(&q_d)?)?;
    let left = left_derived(f, w_c, w_d, opts)?;
    let right = right_derived(f, w_c, w_d, opts)?;
    require_agreement(&derived, (&q_c, &q_d), &left, "left")?;
    require_agreement(&derived, (&q_c, &q_d), &right, "right")?;
    let along = q_c.then(&derived)?;
    let theta = NatTrans::new(along.clone(), f.then(&q_d)?, along.obj_map().iter().map(|&y| q_d.target().identity(y)).collect())?;
    Ok(DerivedResult {
        status: Status::Exists,
        localized: left.localized,
        q_c,
        q_d,
        derived: Some(derived),
        theta: Some(theta),
        lifts: left.lifts,
    })
}

/// `𝐋f = (f∘i)′ ∘ i′⁻¹` after checking, in order: `f∘i` preserves weak
/// equivalences, `i′` is an equivalence, and a right Kan extension
/// `(f′, θ)` of `q_D ∘ f` along `q_C` exists with `θ′ ∘ α′` an equivalence.
pub fn derive_via_resolution(
    f: &FunctorData,
    i: &FunctorData,
    w_c: &Marking,
    w_d: &Marking,
    opts: DeriveOptions,
) -> Result<DerivedResult, DerivedError> {
    let w0 = w_c.preimage(i);
    let fi = i.then(f)?;
    if w0.carried_into(&fi, w_d).is_some() {
        return Err(DerivedError::BulletFailed(1));
    }
    let (l0, lc, ld) = (localize(&w0, opts.depth)?, localize(w_c, opts.depth)?, localize(w_d, opts.depth)?);
    let (q_c, q_d) = (lc.q().clone(), ld.q().clone());
    let i_loc = l0.extend(&i.then(&q_c)?)?;
    let Some(eq) = check_equivalence(&i_loc) else {
        return Err(DerivedError::BulletFailed(2));
    };
    let target = f.then(&q_d)?;
    let Some((kan, theta)) = right_kan_extension(&target, &q_c) else {
        return Err(DerivedError::BulletFailed(3));
    };
    // θ ∘ α: E_{f∘i} → E_{f′}
    let (e0, ek) = (grothendieck_cocart(&fi), grothendieck_cocart(&kan));
    let e0_total = e0.total().clone();
    let positions: HashMap<_, _> = cocart_elements(&kan).into_iter().enumerate().map(|(k, e)| (e, k)).collect();
    let ek_cross = ek.cross_morphisms(0, 1);
    let e0_cross = e0.cross_morphisms(0, 1);
    let dl = q_d.target();
    let mut mor_map = vec![0; e0_total.num_morphisms()];
    for (k, &m) in e0.fiber(0).morphisms.iter().enumerate() {
        mor_map[m] = ek.global_morphism(0, q_c.mor(i.mor(k)));
    }
    for (k, &m) in e0.fiber(1).morphisms.iter().enumerate() {
        mor_map[m] = ek.global_morphism(1, q_d.mor(k));
    }
    for ((x0, m), &e) in cocart_elements(&fi).into_iter().zip(&e0_cross) {
        let c = i.obj(x0);
        let n = dl.compose(q_d.mor(m), theta.components[c]);
        mor_map[e] = ek_cross[positions[&(q_c.obj(c), n)]];
    }
    let obj_map = e0_total
        .objects()
        .map(|o| match e0.degree(o) {
            0 => ek.global(0, q_c.obj(i.obj(e0.local(o)))),
            _ => ek.global(1, q_d.obj(e0.local(o))),
        })
        .collect();
    let h = FunctorData::new(e0_total, ek.total().clone(), obj_map, mor_map)?;
    let marking = marking_from_fibers(&e0, &[w0.clone(), w_d.clone()]);
    let l_e0 = localize_correspondence(&e0, &marking, opts.depth)?;
    let composite = factor_through(&l_e0.q, &h)
        .ok_or_else(|| DerivedError::InternalContradiction("θ ∘ α does not factor through the localization".into()))?;
    if check_equivalence(&composite).is_none() {
        return Err(DerivedError::BulletFailed(3));
    }
    let fi_loc = l0.extend(&fi.then(&q_d)?)?;
    let derived = quasi_inverse(&i_loc, &eq).then(&fi_loc)?;
    let psi = find_natural_iso(&derived, &kan)
        .ok_or_else(|| DerivedError::InternalContradiction("resolution and Kan extension disagree".into()))?;
    let theta = psi.whisker_right(&q_c).then(&theta);
    let left = left_derived(f, w_c, w_d, opts)?;
    require_agreement(&derived, (&q_c, &q_d), &left, "left")?;
    Ok(DerivedResult {
        status: Status::Exists,
        localized: left.localized,
        q_c,
        q_d,
        derived: Some(derived),
        theta: Some(theta),
        lifts: left.lifts,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog;
    use crate::category::chain;
    use crate::functor::all_functors;
    use crate::marking::saturate_marking;

    fn opts() -> DeriveOptions {
        DeriveOptions::default()
    }

    fn galois_f() -> FunctorData {
        let (c2, c1) = (Arc::new(chain(2)), Arc::new(chain(1)));
        all_functors(&c2, &c1).into_iter().find(|f| f.obj_map() == [0, 0, 1]).unwrap()
    }

    #[test]
    fn identity_induces_identity() {
        let a = Arc::new(catalog::arrow());
        let w = saturate_marking(a.clone(), [1]);
        let r = derive_preserving(&FunctorData::identity(a), &w, &w, opts()).unwrap();
        let g = r.derived.unwrap();
        assert!(g.obj_map().iter().enumerate().all(|(x, &y)| x == y));
        assert!(g.mor_map().iter().enumerate().all(|(m, &n)| m == n));
    }

    #[test]
    fn precondition_is_enforced() {
        let f = galois_f();
        let (c, d) = (f.source().clone(), f.target().clone());
        let one_two = c.find_morphism("1<2").unwrap();
        let err = derive_preserving(&f, &saturate_marking(c, [one_two]), &Marking::isos(d), opts()).unwrap_err();
        assert_eq!(err, DerivedError::NotPreserving("1<2".into()));
    }

    #[test]
    fn collapsed_arrow_is_preserved() {
        let f = galois_f();
        let (c, d) = (f.source().clone(), f.target().clone());
        let zero_one = c.find_morphism("0<1").unwrap();
        let r = derive_preserving(&f, &saturate_marking(c, [zero_one]), &Marking::isos(d), opts()).unwrap();
        let g = r.derived.unwrap();
        assert_eq!(g.source().num_objects(), 3);
        assert_eq!(g.obj_map(), &[0, 0, 1]);
    }

    #[test]
    fn point_resolves_the_inverted_arrow() {
        let a = Arc::new(catalog::arrow());
        let t = Arc::new(catalog::terminal());
        let i = FunctorData::constant(t, a.clone(), 0);
        let f = FunctorData::identity(a.clone());
        let r = derive_via_resolution(&f, &i, &saturate_marking(a.clone(), [1]), &Marking::isos(a), opts()).unwrap();
        assert_eq!(r.derived.unwrap().obj_map(), &[0, 0]);
    }

    #[test]
    fn identity_resolution_of_preserving_functor() {
        let f = galois_f();
        let (c, d) = (f.source().clone(), f.target().clone());
        let w_c = saturate_marking(c.clone(), [c.find_morphism("0<1").unwrap()]);
        let r = derive_via_resolution(&f, &FunctorData::identity(c), &w_c, &Marking::isos(d), opts()).unwrap();
        assert_eq!(r.derived.unwrap().obj_map(), &[0, 0, 1]);
    }

    #[test]
    fn non_equivalence_fails_second_bullet() {
        let a = Arc::new(catalog::arrow());
        let t = Arc::new(catalog::terminal());
        let i = FunctorData::constant(t, a.clone(), 0);
        let f = FunctorData::identity(a.clone());
        let err = derive_via_resolution(&f, &i, &Marking::isos(a.clone()), &Marking::isos(a), opts()).unwrap_err();
        assert_eq!(err, DerivedError::BulletFailed(2));
    }
}
