//! Localization of marked finite categories: calculus of fractions, a
//! bounded zig-zag enumeration, Deligne's construction and localized
//! correspondences.

mod correspondence;
mod deligne;
mod fractions;
mod zigzag;

use std::sync::Arc;

use crate::category::{FinCat, Mor, Obj};
use crate::error::LocalizationError;
use crate::functor::{FunctorData, FunctorSearch};
use crate::marking::Marking;

pub use correspondence::{fiber_marking, localize_correspondence, marking_from_fibers, LocalizedCorrespondence, Route};
pub use deligne::{deligne_comparison, deligne_correspondence, DeligneComparison, DeligneCorrespondence};
pub use fractions::{
    check_left_fractions, check_right_fractions, fraction_composition_is_independent, localize_fractions,
    localize_left_fractions, resolution_category, FractionsReport, ResolutionCategory,
};
pub use zigzag::{localize_zigzag, ZigzagRun};

pub const DEFAULT_ZIGZAG_DEPTH: usize = 6;

/// One step of a zig-zag, in application order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Forward(Mor),
    /// Formal inverse of a marked morphism.
    Inverse(Mor),
}

/// A span `x ← apex → y` (right fraction, `forward ∘ backward⁻¹`) or a
/// cospan `x → apex ← y` (left fraction, `backward⁻¹ ∘ forward`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub apex: Obj,
    pub backward: Mor,
    pub forward: Mor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    RightFractions,
    LeftFractions,
    /// Exact closure of zig-zags of bounded length.
    Zigzag { depth: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Right(Fraction),
    Left(Fraction),
    Word(Vec<Letter>),
}

impl Certificate {
    pub fn word(&self) -> Vec<Letter> {
        match self {
            Certificate::Right(f) => vec![Letter::Inverse(f.backward), Letter::Forward(f.forward)],
            Certificate::Left(f) => vec![Letter::Forward(f.forward), Letter::Inverse(f.backward)],
            Certificate::Word(w) => w.clone(),
        }
    }
}

/// `q: C → C[W⁻¹]`, identity on objects, with a representative per
/// morphism of the localization.
#[derive(Clone, Debug)]
pub struct LocalizationResult {
    marking: Marking,
    localized: Arc<FinCat>,
    q: FunctorData,
    method: Method,
    certificates: Vec<Certificate>,
}

impl LocalizationResult {
    pub(crate) fn new(marking: Marking, localized: Arc<FinCat>, q: FunctorData, method: Method, certificates: Vec<Certificate>) -> Self {
        debug_assert_eq!(certificates.len(), localized.num_morphisms());
        Self { marking, localized, q, method, certificates }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        self.marking.host()
    }

    pub fn marking(&self) -> &Marking {
        &self.marking
    }

    pub fn localized(&self) -> &Arc<FinCat> {
        &self.localized
    }

    pub fn q(&self) -> &FunctorData {
        &self.q
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn certificate(&self, m: Mor) -> &Certificate {
        &self.certificates[m]
    }

    /// Representative zig-zag of a localized morphism.
    pub fn word(&self, m: Mor) -> Vec<Letter> {
        self.certificates[m].word()
    }

    /// Whether `q` sends every marked morphism to an isomorphism.
    pub fn inverts_marking(&self) -> bool {
        self.marking.members().all(|s| self.localized.is_iso(self.q.mor(s)))
    }

    /// The factorisation `h′` of `h` through `q`, evaluated on the
    /// representative words.
    pub fn extend(&self, h: &FunctorData) -> Result<FunctorData, LocalizationError> {
        let (c, x) = (self.source(), h.target());
        if let Some(s) = self.marking.members().find(|&s| !x.is_iso(h.mor(s))) {
            return Err(LocalizationError::NotInverting(c.morphism_name(s).to_string()));
        }
        let mor_map = self
            .localized
            .morphisms()
            .map(|m| {
                eval_word(x, h, h.obj(self.localized.src(m)), &self.word(m))
            })
            .collect();
        let obj_map = self.localized.objects().map(|o| h.obj(o)).collect();
        Ok(FunctorData::new(self.localized.clone(), x.clone(), obj_map, mor_map)?)
    }
}

fn eval_word(x: &FinCat, h: &FunctorData, start: Obj, word: &[Letter]) -> Mor {
    word.iter().fold(x.identity(start), |acc, &l| match l {
        Letter::Forward(m) => x.compose(h.mor(m), acc),
        Letter::Inverse(s) => x.compose(x.inverse(h.mor(s)).expect("inverted"), acc),
    })
}

/// Number of functors `h′` out of the localization with `h′ ∘ q = h`,
/// by exhaustive search.
pub fn count_factorisations(result: &LocalizationResult, h: &FunctorData) -> usize {
    let (l, x) = (result.localized(), h.target());
    let mut search = FunctorSearch::new(l, x);
    for o in result.source().objects() {
        search = search.fix_object(o, h.obj(o));
    }
    let mut fixed = vec![None; l.num_morphisms()];
    for m in result.source().morphisms() {
        match fixed[result.q().mor(m)] {
            Some(image) if image != h.mor(m) => return 0,
            _ => fixed[result.q().mor(m)] = Some(h.mor(m)),
        }
        search = search.fix_morphism(result.q().mor(m), h.mor(m));
    }
    search.count()
}

/// Right fractions, then left fractions, then the zig-zag closure at
/// `depth`.
pub fn localize(w: &Marking, depth: usize) -> Result<LocalizationResult, LocalizationError> {
    if check_right_fractions(w).is_empty() {
        return localize_fractions(w);
    }
    if check_left_fractions(w).is_empty() {
        return localize_left_fractions(w);
    }
    let run = localize_zigzag(w, depth);
    run.result.ok_or(LocalizationError::NotConverged { depth })
}
