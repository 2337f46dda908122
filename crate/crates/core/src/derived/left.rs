//! Left and right derived functors as classifying functors of localized
//! Grothendieck constructions.

use std::sync::Arc;

use super::{comparison, DeriveOptions};
use crate::category::{FinCat, Mor, Obj};
use crate::correspondence::{check_cartesian, check_cocartesian, grothendieck_cart, grothendieck_cocart, Correspondence};
use crate::error::{CorrespondenceError, DerivedError};
use crate::functor::{check_equivalence, dual_functor, FunctorData};
use crate::localization::{localize, localize_correspondence, marking_from_fibers, LocalizedCorrespondence};
use crate::marking::Marking;
use crate::natural::NatTrans;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Exists,
    FailsCocartesian,
    FailsCartesian,
}

#[derive(Clone, Debug)]
pub struct DerivedResult {
    pub status: Status,
    pub localized: LocalizedCorrespondence,
    /// `C → C′`.
    pub q_c: FunctorData,
    /// `D → D′`.
    pub q_d: FunctorData,
    /// `C′ → D′`.
    pub derived: Option<FunctorData>,
    /// `𝐋f ∘ q_C ⇒ q_D ∘ f` for left derived functors,
    /// `q_D ∘ f ⇒ 𝐑f ∘ q_C` for right derived ones.
    pub theta: Option<NatTrans>,
    /// The chosen (co)cartesian lift per object of `C′`.
    pub lifts: Vec<Mor>,
}

impl DerivedResult {
    pub fn exists(&self) -> bool {
        self.status == Status::Exists
    }
}

/// Cross elements `(x, m: f x → d)` of `E_f` in block order.
pub(crate) fn cocart_elements(f: &FunctorData) -> Vec<(Obj, Mor)> {
    let d = f.target();
    f.source().objects().flat_map(|x| d.morphisms().filter(move |&m| d.src(m) == f.obj(x)).map(move |m| (x, m))).collect()
}

/// Position of the element `(x, id_{f x})` among the cross morphisms of
/// `E_f` (`cartesian = false`) or `F_f`.
fn unit_position(f: &FunctorData, x: Obj, cartesian: bool) -> usize {
    let d = f.target();
    let attached = |y: Obj, m: Mor| if cartesian { d.tgt(m) == f.obj(y) } else { d.src(m) == f.obj(y) };
    let before: usize = (0..x).map(|y| d.morphisms().filter(|&m| attached(y, m)).count()).sum();
    before + d.morphisms().filter(|&m| attached(x, m)).position(|m| m == d.identity(f.obj(x))).expect("identity")
}

fn fiber_in(x: &Correspondence, i: usize, m: Mor) -> Mor {
    x.local_morphism(m).unwrap_or_else(|| panic!("morphism {m} is not in fiber {i}"))
}

/// Checks that the fiber localizations agree with standalone
/// localizations of the markings.
fn cross_check_fibers(l: &LocalizedCorrespondence, markings: [&Marking; 2], depth: usize) -> Result<(), DerivedError> {
    for (i, w) in markings.into_iter().enumerate() {
        let standalone = localize(w, depth)?;
        let ok = comparison(l.fibers[i].q(), standalone.q()).is_some_and(|phi| check_equivalence(&phi).is_some());
        if !ok {
            return Err(DerivedError::InternalContradiction(format!("fiber {i} localization differs from the standalone one")));
        }
    }
    Ok(())
}

pub fn left_derived(f: &FunctorData, w_c: &Marking, w_d: &Marking, opts: DeriveOptions) -> Result<DerivedResult, DerivedError> {
    let e = grothendieck_cocart(f);
    let w = marking_from_fibers(&e, &[w_c.clone(), w_d.clone()]);
    let l = localize_correspondence(&e, &w, opts.depth)?;
    cross_check_fibers(&l, [w_c, w_d], opts.depth)?;
    let (q_c, q_d) = (l.fibers[0].q().clone(), l.fibers[1].q().clone());
    let x = &l.correspondence;
    let witness = match check_cocartesian(x) {
        Ok(w) => w,
        Err(CorrespondenceError::NotCocartesian { .. }) => {
            return Ok(DerivedResult { status: Status::FailsCocartesian, localized: l, q_c, q_d, derived: None, theta: None, lifts: Vec::new() })
        }
        Err(other) => return Err(other.into()),
    };
    let derived = witness.classifying[0].clone();
    let t = x.total();
    let cross = e.cross_morphisms(0, 1);
    let comps = f
        .source()
        .objects()
        .map(|c| {
            let lift = witness.lifts[0][c];
            let h = l.q.mor(cross[unit_position(f, c, false)]);
            let g = t
                .hom(t.tgt(lift), t.tgt(h))
                .iter()
                .copied()
                .find(|&g| t.compose(g, lift) == h)
                .expect("cocartesian factorisation");
            fiber_in(x, 1, g)
        })
        .collect();
    let theta = NatTrans::new(q_c.then(&derived)?, f.then(&q_d)?, comps)
        .map_err(|e| DerivedError::InternalContradiction(format!("θ is not natural: {e}")))?;
    let lifts = witness.lifts[0].clone();
    Ok(DerivedResult { status: Status::Exists, localized: l, q_c, q_d, derived: Some(derived), theta: Some(theta), lifts })
}

/// The right derived functor, from the cartesian fibration `F′_f`.
pub fn right_derived_via_cartesian(
    f: &FunctorData,
    w_c: &Marking,
    w_d: &Marking,
    opts: DeriveOptions,
) -> Result<DerivedResult, DerivedError> {
    let e = grothendieck_cart(f);
    let w = marking_from_fibers(&e, &[w_d.clone(), w_c.clone()]);
    let l = localize_correspondence(&e, &w, opts.depth)?;
    cross_check_fibers(&l, [w_d, w_c], opts.depth)?;
    let (q_d, q_c) = (l.fibers[0].q().clone(), l.fibers[1].q().clone());
    let x = &l.correspondence;
    let witness = match check_cartesian(x) {
        Ok(w) => w,
        Err(CorrespondenceError::NotCartesian { .. }) => {
            return Ok(DerivedResult { status: Status::FailsCartesian, localized: l, q_c, q_d, derived: None, theta: None, lifts: Vec::new() })
        }
        Err(other) => return Err(other.into()),
    };
    let derived = witness.classifying[0].clone();
    let t = x.total();
    let cross = e.cross_morphisms(0, 1);
    let comps = f
        .source()
        .objects()
        .map(|c| {
            let lift = witness.lifts[0][c];
            let h = l.q.mor(cross[unit_position(f, c, true)]);
            let g = t
                .hom(t.src(h), t.src(lift))
                .iter()
                .copied()
                .find(|&g| t.compose(lift, g) == h)
                .expect("cartesian factorisation");
            fiber_in(x, 0, g)
        })
        .collect();
    let theta = NatTrans::new(f.then(&q_d)?, q_c.then(&derived)?, comps)
        .map_err(|e| DerivedError::InternalContradiction(format!("θ is not natural: {e}")))?;
    let lifts = witness.lifts[0].clone();
    Ok(DerivedResult { status: Status::Exists, localized: l, q_c, q_d, derived: Some(derived), theta: Some(theta), lifts })
}

fn dual_nat(t: &NatTrans, source: FunctorData, target: FunctorData) -> NatTrans {
    NatTrans { source, target, components: t.components.clone() }
}

/// The right derived functor as the dual of the left derived functor of
/// `f^op` with respect to the opposite markings.
pub fn right_derived(f: &FunctorData, w_c: &Marking, w_d: &Marking, opts: DeriveOptions) -> Result<DerivedResult, DerivedError> {
    let f_op = dual_functor(f);
    let w_c_op = w_c.opposite(f_op.source().clone());
    let w_d_op = w_d.opposite(f_op.target().clone());
    let r = left_derived(&f_op, &w_c_op, &w_d_op, opts)?;
    let (c, d) = (f.source().clone(), f.target().clone());
    let c_loc: Arc<FinCat> = Arc::new(r.q_c.target().opposite());
    let d_loc: Arc<FinCat> = Arc::new(r.q_d.target().opposite());
    let q_c = r.q_c.dual_with(c.clone(), c_loc.clone());
    let q_d = r.q_d.dual_with(d.clone(), d_loc.clone());
    let reoriented = r.localized.correspondence.opposite();
    let total = grothendieck_cart(f).total().clone();
    let localized = LocalizedCorrespondence {
        q: r.localized.q.dual_with(total, reoriented.total().clone()),
        correspondence: reoriented,
        route: r.localized.route,
        fibers: Vec::new(),
    };
    let status = match r.status {
        Status::Exists => Status::Exists,
        _ => Status::FailsCartesian,
    };
    let derived = r.derived.as_ref().map(|g| g.dual_with(c_loc.clone(), d_loc.clone()));
    let theta = match (&r.theta, &derived) {
        (Some(t), Some(g)) => Some(dual_nat(t, f.then(&q_d)?, q_c.then(g)?)),
        _ => None,
    };
    Ok(DerivedResult { status, localized, q_c, q_d, derived, theta, lifts: r.lifts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::derived::agree_up_to_localization;
    use crate::marking::saturate_marking;
    use crate::natural::find_natural_iso;

    fn opts() -> DeriveOptions {
        DeriveOptions::default()
    }

    #[test]
    fn identity_with_marked_source_is_constant() {
        let a = Arc::new(catalog::arrow());
        let f = FunctorData::identity(a.clone());
        let r = left_derived(&f, &saturate_marking(a.clone(), [1]), &Marking::isos(a), opts()).unwrap();
        assert!(r.exists());
        let lf = r.derived.unwrap();
        assert_eq!(lf.obj_map(), &[0, 0]);
        let theta = r.theta.unwrap();
        let d = r.q_d.target();
        assert_eq!((d.src(theta.components[0]), d.tgt(theta.components[0])), (0, 0));
        assert_eq!((d.src(theta.components[1]), d.tgt(theta.components[1])), (0, 1));
    }

    #[test]
    fn nothing_inverted_gives_the_functor_back() {
        let c = Arc::new(catalog::cospan());
        let d = Arc::new(catalog::arrow());
        let f = crate::functor::all_functors(&c, &d).into_iter().find(|f| f.obj_map() == [0, 0, 1]).unwrap();
        let (wc, wd) = (Marking::isos(c), Marking::isos(d));
        for r in [left_derived(&f, &wc, &wd, opts()).unwrap(), right_derived(&f, &wc, &wd, opts()).unwrap()] {
            let g = r.derived.clone().unwrap();
            let back = r.q_c.then(&g).unwrap();
            assert!(find_natural_iso(&back, &f.then(&r.q_d).unwrap()).is_some());
        }
    }

    #[test]
    fn right_derived_routes_agree() {
        let a = Arc::new(catalog::arrow());
        let f = FunctorData::identity(a.clone());
        let (wc, wd) = (saturate_marking(a.clone(), [1]), Marking::isos(a));
        let direct = right_derived_via_cartesian(&f, &wc, &wd, opts()).unwrap();
        let dual = right_derived(&f, &wc, &wd, opts()).unwrap();
        assert_eq!(direct.exists(), dual.exists());
        assert!(direct.exists());
        assert!(agree_up_to_localization(
            direct.derived.as_ref().unwrap(),
            (&direct.q_c, &direct.q_d),
            dual.derived.as_ref().unwrap(),
            (&dual.q_c, &dual.q_d),
        ));
        // 𝐑 id is constant at 1
        assert_eq!(direct.derived.unwrap().obj_map(), &[1, 1]);
    }
}
