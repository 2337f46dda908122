//! Derived functors through localized Grothendieck constructions, derived
//! adjunctions, Kan extensions, and derivability of composites and
//! families.

mod adjunction;
mod composition;
mod family;
mod kan;
mod left;
mod resolution;

use crate::functor::{FunctorData, FunctorSearch};
use crate::natural::find_natural_iso;

pub use adjunction::{check_adjunction, derive_adjoint_pair, find_right_adjoint, AdjunctionWitness, DerivedAdjunction};
pub use composition::{derive_pair_composition, CompositionReport};
pub use family::{derive_adjoint_family, derive_family, FamilyData, FamilyResult, TriangleCertificate};
pub use kan::{check_absolute, re_category, right_kan_extension, ReCategory};
pub use left::{left_derived, right_derived, right_derived_via_cartesian, DerivedResult, Status};
pub use resolution::{derive_preserving, derive_via_resolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeriveOptions {
    pub depth: usize,
}

impl Default for DeriveOptions {
    fn default() -> Self {
        Self { depth: crate::localization::DEFAULT_ZIGZAG_DEPTH }
    }
}

/// The functor `φ` with `φ ∘ q1 = q2` that is the identity on objects,
/// when it exists (it is then unique).
pub fn comparison(q1: &FunctorData, q2: &FunctorData) -> Option<FunctorData> {
    factor_through(q1, q2)
}

/// A functor `φ` out of the target of `q` with `φ ∘ q = h`, found by
/// search.
pub(crate) fn factor_through(q: &FunctorData, h: &FunctorData) -> Option<FunctorData> {
    let (a, b) = (q.target(), h.target());
    let mut fixed_obj = vec![None; a.num_objects()];
    let mut fixed = vec![None; a.num_morphisms()];
    let mut search = FunctorSearch::new(a, b);
    for x in q.source().objects() {
        let k = q.obj(x);
        if fixed_obj[k].is_some_and(|image| image != h.obj(x)) {
            return None;
        }
        fixed_obj[k] = Some(h.obj(x));
        search = search.fix_object(k, h.obj(x));
    }
    for m in q.source().morphisms() {
        let k = q.mor(m);
        if fixed[k].is_some_and(|image| image != h.mor(m)) {
            return None;
        }
        fixed[k] = Some(h.mor(m));
        search = search.fix_morphism(k, h.mor(m));
    }
    search.first(a, b)
}

/// Whether `f: C′_1 → D′_1` and `g: C′_2 → D′_2`, localizations of the
/// same functor data along `(qc_i, qd_i)`, are naturally isomorphic once
/// the localizations are identified.
pub fn agree_up_to_localization(
    f: &FunctorData,
    (qc1, qd1): (&FunctorData, &FunctorData),
    g: &FunctorData,
    (qc2, qd2): (&FunctorData, &FunctorData),
) -> bool {
    let (Some(phi_c), Some(phi_d)) = (comparison(qc1, qc2), comparison(qd1, qd2)) else {
        return false;
    };
    let left = f.then_unchecked(&phi_d);
    let right = phi_c.then_unchecked(g);
    find_natural_iso(&left, &right).is_some()
}
