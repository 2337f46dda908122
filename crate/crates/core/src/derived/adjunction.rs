//! Adjunctions between finite categories and derived adjoint pairs.

use super::DeriveOptions;
use crate::correspondence::{check_cartesian, check_cocartesian, find_iso_fixing_fibers, grothendieck_cart, grothendieck_cocart};
use crate::error::DerivedError;
use crate::functor::{all_functors, FunctorData};
use crate::localization::{localize_correspondence, marking_from_fibers, LocalizedCorrespondence};
use crate::marking::Marking;
use crate::natural::{natural_transformations, NatTrans};

/// Unit `id ⇒ g ∘ f` and counit `f ∘ g ⇒ id` of `f ⊣ g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionWitness {
    pub unit: NatTrans,
    pub counit: NatTrans,
}

impl AdjunctionWitness {
    /// Both triangle identities, checked componentwise.
    pub fn triangles_hold(&self, f: &FunctorData, g: &FunctorData) -> bool {
        let (c, d) = (f.source(), f.target());
        let left = c
            .objects()
            .all(|x| d.compose(self.counit.component(f.obj(x)), f.mor(self.unit.component(x))) == d.identity(f.obj(x)));
        let right = d
            .objects()
            .all(|y| c.compose(g.mor(self.counit.component(y)), self.unit.component(g.obj(y))) == c.identity(g.obj(y)));
        left && right
    }
}

/// First unit/counit pair, in enumeration order, exhibiting `f ⊣ g`.
pub fn check_adjunction(f: &FunctorData, g: &FunctorData) -> Option<AdjunctionWitness> {
    if !(f.source().same_table(g.target()) && f.target().same_table(g.source())) {
        return None;
    }
    let gf = f.then_unchecked(g);
    let fg = g.then_unchecked(f);
    let units = natural_transformations(&FunctorData::identity(f.source().clone()), &gf).ok()?;
    let counits = natural_transformations(&fg, &FunctorData::identity(f.target().clone())).ok()?;
    units.iter().find_map(|unit| {
        counits.iter().find_map(|counit| {
            let w = AdjunctionWitness { unit: unit.clone(), counit: counit.clone() };
            w.triangles_hold(f, g).then_some(w)
        })
    })
}

/// A right adjoint of `f` by exhaustive search.
pub fn find_right_adjoint(f: &FunctorData) -> Option<(FunctorData, AdjunctionWitness)> {
    all_functors(f.target(), f.source()).into_iter().find_map(|g| check_adjunction(f, &g).map(|w| (g, w)))
}

#[derive(Clone, Debug)]
pub struct DerivedAdjunction {
    pub localized: LocalizedCorrespondence,
    pub left: FunctorData,
    pub right: FunctorData,
    pub witness: AdjunctionWitness,
}

/// `𝐋f ⊣ 𝐑g` from the single localization of `E_f = F_g`.
pub fn derive_adjoint_pair(
    f: &FunctorData,
    g: &FunctorData,
    w_c: &Marking,
    w_d: &Marking,
    opts: DeriveOptions,
) -> Result<DerivedAdjunction, DerivedError> {
    check_adjunction(f, g).ok_or(DerivedError::NotAdjoint)?;
    let e = grothendieck_cocart(f);
    if find_iso_fixing_fibers(&e, &grothendieck_cart(g)).is_none() {
        return Err(DerivedError::InternalContradiction("E_f and F_g are not isomorphic over the fibers".into()));
    }
    let w = marking_from_fibers(&e, &[w_c.clone(), w_d.clone()]);
    let localized = localize_correspondence(&e, &w, opts.depth)?;
    let x = &localized.correspondence;
    let cocart = check_cocartesian(x).map_err(|e| DerivedError::DerivedMissing(format!("left: {e}")))?;
    let cart = check_cartesian(x).map_err(|e| DerivedError::DerivedMissing(format!("right: {e}")))?;
    let (left, right) = (cocart.classifying[0].clone(), cart.classifying[0].clone());
    let (ell, r) = (&cocart.lifts[0], &cart.lifts[0]);
    let t = x.total();
    let (c, d) = (x.fiber_cat(0).clone(), x.fiber_cat(1).clone());
    let unit = c
        .objects()
        .map(|a| {
            let target = r[left.obj(a)];
            let m = t
                .hom(x.global(0, a), t.src(target))
                .iter()
                .copied()
                .find(|&m| t.compose(target, m) == ell[a])
                .expect("cartesian factorisation");
            x.local_morphism(m).expect("fiber morphism")
        })
        .collect();
    let counit = d
        .objects()
        .map(|b| {
            let source = ell[right.obj(b)];
            let m = t
                .hom(t.tgt(source), x.global(1, b))
                .iter()
                .copied()
                .find(|&m| t.compose(m, source) == r[b])
                .expect("cocartesian factorisation");
            x.local_morphism(m).expect("fiber morphism")
        })
        .collect();
    let contradiction = |what: &str| DerivedError::InternalContradiction(format!("derived {what} is not natural"));
    let unit = NatTrans::new(FunctorData::identity(c.clone()), left.then(&right)?, unit).map_err(|_| contradiction("unit"))?;
    let counit = NatTrans::new(right.then(&left)?, FunctorData::identity(d.clone()), counit).map_err(|_| contradiction("counit"))?;
    let witness = AdjunctionWitness { unit, counit };
    if !witness.triangles_hold(&left, &right) {
        return Err(DerivedError::InternalContradiction("derived triangle identities fail".into()));
    }
    Ok(DerivedAdjunction { localized, left, right, witness })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog;
    use crate::category::chain;
    use crate::derived::comparison;
    use crate::marking::saturate_marking;
    use crate::natural::find_natural_iso;

    fn galois() -> (FunctorData, FunctorData) {
        let (c2, c1) = (Arc::new(chain(2)), Arc::new(chain(1)));
        let f = all_functors(&c2, &c1).into_iter().find(|f| f.obj_map() == [0, 0, 1]).unwrap();
        let g = all_functors(&c1, &c2).into_iter().find(|g| g.obj_map() == [1, 2]).unwrap();
        (f, g)
    }

    #[test]
    fn identity_is_self_adjoint() {
        let a = Arc::new(catalog::arrow());
        let id = FunctorData::identity(a.clone());
        let w = check_adjunction(&id, &id).unwrap();
        assert!(w.unit.components.iter().all(|&m| a.is_identity(m)));
    }

    #[test]
    fn galois_connection_orientation() {
        let (f, g) = galois();
        assert!(check_adjunction(&f, &g).is_some());
        assert!(check_adjunction(&g, &f).is_none());
        let t = Arc::new(catalog::terminal());
        let a = Arc::new(catalog::arrow());
        let at_zero = FunctorData::constant(t.clone(), a.clone(), 0);
        let bang = FunctorData::constant(a, t, 0);
        assert!(check_adjunction(&at_zero, &bang).is_some());
        assert!(check_adjunction(&bang, &at_zero).is_none());
    }

    #[test]
    fn derived_galois_pair() {
        let (f, g) = galois();
        let (c, d) = (f.source().clone(), f.target().clone());
        let one_two = c.find_morphism("1<2").unwrap();
        let r = derive_adjoint_pair(&f, &g, &saturate_marking(c, [one_two]), &Marking::isos(d), DeriveOptions::default()).unwrap();
        assert!(r.witness.triangles_hold(&r.left, &r.right));
    }

    #[test]
    fn nothing_inverted_recovers_the_pair() {
        let (f, g) = galois();
        let (c, d) = (f.source().clone(), f.target().clone());
        let r = derive_adjoint_pair(&f, &g, &Marking::isos(c), &Marking::isos(d), DeriveOptions::default()).unwrap();
        assert_eq!(r.left.obj_map(), f.obj_map());
        assert_eq!(r.right.obj_map(), g.obj_map());
    }

    #[test]
    fn identity_with_inverted_arrow_is_an_equivalence() {
        let a = Arc::new(catalog::arrow());
        let id = FunctorData::identity(a.clone());
        let w = saturate_marking(a, [1]);
        let r = derive_adjoint_pair(&id, &id, &w, &w, DeriveOptions::default()).unwrap();
        let fibers = &r.localized.fibers;
        let phi = comparison(fibers[0].q(), fibers[1].q()).unwrap();
        assert!(find_natural_iso(&r.left, &phi).is_some());
        assert!(r.witness.unit.is_iso() && r.witness.counit.is_iso());
    }
}
