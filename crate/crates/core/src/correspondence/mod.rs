//! Categories over the chain `[n]`: Grothendieck constructions, fibration
//! checks, gluing and composition of correspondences.

mod bifibration;
mod build;
mod compose;
mod fibration;
mod grothendieck;
mod sections;

use std::sync::Arc;

use crate::category::{chain, FinCat, Mor, Obj};
use crate::error::CorrespondenceError;
use crate::functor::{FunctorData, FunctorSearch};

pub use bifibration::{
    bifibration_report, check_bifibration, check_lax_bifibration, is_cartesian_fibration, is_cocartesian_fibration,
    is_p_cartesian, is_p_cocartesian, BifibrationReport,
};
pub(crate) use build::{build_over_chain, Cross};
pub use compose::{check_flat_over_triangle, compose_correspondences, glue};
pub use fibration::{
    cartesian_lifts, check_cartesian, check_cocartesian, classify_cartesian, classify_cartesian_with, classify_cocartesian,
    classify_with, cocartesian_lifts, is_cartesian_arrow, is_cocartesian_arrow, CartWitness, CocartWitness,
};
pub use grothendieck::{grothendieck_cart, grothendieck_chain, grothendieck_cocart};
pub use sections::{fiber_product_of_sections, sections_category};

/// A fiber of a correspondence together with its embedding in the total
/// category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub cat: Arc<FinCat>,
    /// Total object id per fiber object.
    pub objects: Vec<Obj>,
    /// Total morphism id per fiber morphism.
    pub morphisms: Vec<Mor>,
}

/// A finite category with a functor to `[n]`, stored as a degree per
/// object.
#[derive(Clone, Debug)]
pub struct Correspondence {
    total: Arc<FinCat>,
    base_length: usize,
    degree: Vec<usize>,
    fibers: Vec<Fiber>,
    /// Index of each object inside its fiber.
    local: Vec<usize>,
    /// Index of each fiber morphism inside its fiber, `usize::MAX` for
    /// cross morphisms.
    local_mor: Vec<usize>,
}

impl PartialEq for Correspondence {
    fn eq(&self, other: &Self) -> bool {
        self.base_length == other.base_length && self.degree == other.degree && *self.total == *other.total
    }
}

impl Eq for Correspondence {}

impl Correspondence {
    pub fn new(total: Arc<FinCat>, base_length: usize, degree: Vec<usize>) -> Result<Self, CorrespondenceError> {
        if degree.len() != total.num_objects() {
            return Err(CorrespondenceError::NotFunctorial(format!(
                "{} degrees for {} objects",
                degree.len(),
                total.num_objects()
            )));
        }
        if let Some(x) = total.objects().find(|&x| degree[x] > base_length) {
            return Err(CorrespondenceError::NotFunctorial(format!(
                "object {} has degree {} > {base_length}",
                total.object_name(x),
                degree[x]
            )));
        }
        if let Some(m) = total.morphisms().find(|&m| degree[total.src(m)] > degree[total.tgt(m)]) {
            return Err(CorrespondenceError::NotFunctorial(total.morphism_name(m).to_string()));
        }
        Ok(Self::assemble(total, base_length, degree, None))
    }

    /// Like [`Correspondence::new`] but reuses the given fiber categories,
    /// which must equal the computed ones.
    pub(crate) fn with_fibers(
        total: Arc<FinCat>,
        base_length: usize,
        degree: Vec<usize>,
        fibers: Vec<Arc<FinCat>>,
    ) -> Self {
        Self::assemble(total, base_length, degree, Some(fibers))
    }

    fn assemble(total: Arc<FinCat>, base_length: usize, degree: Vec<usize>, given: Option<Vec<Arc<FinCat>>>) -> Self {
        let mut local = vec![0; total.num_objects()];
        let mut local_mor = vec![usize::MAX; total.num_morphisms()];
        let mut fibers = Vec::with_capacity(base_length + 1);
        for i in 0..=base_length {
            let objects: Vec<Obj> = total.objects().filter(|&x| degree[x] == i).collect();
            for (k, &x) in objects.iter().enumerate() {
                local[x] = k;
            }
            let (cat, morphisms) = total.full_subcategory(&objects);
            for (k, &m) in morphisms.iter().enumerate() {
                local_mor[m] = k;
            }
            let cat = match &given {
                Some(g) => {
                    debug_assert!(*g[i] == cat, "supplied fiber {i} differs from the computed one");
                    g[i].clone()
                }
                None => Arc::new(cat),
            };
            fibers.push(Fiber { cat, objects, morphisms });
        }
        Self { total, base_length, degree, fibers, local, local_mor }
    }

    pub fn total(&self) -> &Arc<FinCat> {
        &self.total
    }

    pub fn base_length(&self) -> usize {
        self.base_length
    }

    pub fn degree(&self, x: Obj) -> usize {
        self.degree[x]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn fiber(&self, i: usize) -> &Fiber {
        &self.fibers[i]
    }

    pub fn fiber_cat(&self, i: usize) -> &Arc<FinCat> {
        &self.fibers[i].cat
    }

    /// Position of `x` inside its fiber.
    pub fn local(&self, x: Obj) -> usize {
        self.local[x]
    }

    /// Position of a fiber morphism inside its fiber.
    pub fn local_morphism(&self, m: Mor) -> Option<usize> {
        let k = self.local_mor[m];
        (k != usize::MAX).then_some(k)
    }

    /// Total object of fiber object `x` at level `i`.
    pub fn global(&self, i: usize, x: Obj) -> Obj {
        self.fibers[i].objects[x]
    }

    pub fn global_morphism(&self, i: usize, m: Mor) -> Mor {
        self.fibers[i].morphisms[m]
    }

    pub fn objects_at(&self, i: usize) -> &[Obj] {
        &self.fibers[i].objects
    }

    pub fn morphism_degrees(&self, m: Mor) -> (usize, usize) {
        (self.degree[self.total.src(m)], self.degree[self.total.tgt(m)])
    }

    /// Total morphisms from level `i` to level `j`, in index order.
    pub fn cross_morphisms(&self, i: usize, j: usize) -> Vec<Mor> {
        self.total.morphisms().filter(|&m| self.morphism_degrees(m) == (i, j)).collect()
    }

    /// The structure functor to `[n]`.
    pub fn degree_functor(&self) -> FunctorData {
        let base = Arc::new(chain(self.base_length));
        let mor_map = self
            .total
            .morphisms()
            .map(|m| {
                let (i, j) = self.morphism_degrees(m);
                crate::category::chain_arrow(self.base_length, i, j)
            })
            .collect();
        FunctorData::new_unchecked(self.total.clone(), base, self.degree.clone(), mor_map)
    }

    /// Base change along the inclusion of the (increasing) `levels`.
    pub fn restrict(&self, levels: &[usize]) -> Result<Correspondence, CorrespondenceError> {
        if levels.is_empty() || levels.windows(2).any(|w| w[0] >= w[1]) || levels[levels.len() - 1] > self.base_length {
            return Err(CorrespondenceError::BadBase { expected: self.base_length, found: levels.len() });
        }
        let objects: Vec<Obj> = self.total.objects().filter(|&x| levels.contains(&self.degree[x])).collect();
        let (total, _) = self.total.full_subcategory(&objects);
        let degree = objects
            .iter()
            .map(|&x| levels.iter().position(|&l| l == self.degree[x]).expect("kept level"))
            .collect();
        let fibers = levels.iter().map(|&l| self.fibers[l].cat.clone()).collect();
        Ok(Self::with_fibers(Arc::new(total), levels.len() - 1, degree, fibers))
    }

    /// The opposite total category over `[n]` with degrees `n - d`.
    pub fn opposite(&self) -> Correspondence {
        let degree = self.degree.iter().map(|&d| self.base_length - d).collect();
        Self::assemble(Arc::new(self.total.opposite()), self.base_length, degree, None)
    }

    pub fn require_base(&self, n: usize) -> Result<(), CorrespondenceError> {
        if self.base_length != n {
            return Err(CorrespondenceError::BadBase { expected: n, found: self.base_length });
        }
        Ok(())
    }
}

/// An isomorphism of total categories commuting with the degrees.
pub fn find_correspondence_iso(a: &Correspondence, b: &Correspondence) -> Option<FunctorData> {
    if a.base_length != b.base_length {
        return None;
    }
    crate::functor::find_isomorphism_with(&a.total, &b.total, |x, y| a.degree[x] == b.degree[y])
}

/// An isomorphism over the base that is the identity on every fiber.
/// Requires equal fibers.
pub fn find_iso_fixing_fibers(a: &Correspondence, b: &Correspondence) -> Option<FunctorData> {
    if a.base_length != b.base_length || (0..=a.base_length).any(|i| *a.fiber_cat(i) != *b.fiber_cat(i)) {
        return None;
    }
    let mut search = FunctorSearch::new(&a.total, &b.total).injective();
    for x in a.total.objects() {
        search = search.fix_object(x, b.global(a.degree[x], a.local[x]));
    }
    for i in 0..=a.base_length {
        for (k, &m) in a.fibers[i].morphisms.iter().enumerate() {
            search = search.fix_morphism(m, b.fibers[i].morphisms[k]);
        }
    }
    search.first(&a.total, &b.total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::category::product_with_chain;

    #[test]
    fn product_with_chain_is_a_correspondence() {
        let c = catalog::arrow();
        let total = Arc::new(product_with_chain(&c, 1));
        let degree = total.objects().map(|x| x % 2).collect();
        let x = Correspondence::new(total, 1, degree).unwrap();
        assert_eq!(x.fiber_cat(0).num_morphisms(), 3);
        assert_eq!(x.cross_morphisms(0, 1).len(), 3);
        assert!(x.degree_functor().check().is_ok());
    }

    #[test]
    fn backwards_degree_is_rejected() {
        let total = Arc::new(catalog::arrow());
        let err = Correspondence::new(total, 1, vec![1, 0]).unwrap_err();
        assert!(matches!(err, CorrespondenceError::NotFunctorial(_)));
    }

    #[test]
    fn restriction_keeps_fibers() {
        let total = Arc::new(chain(2));
        let x = Correspondence::new(total, 2, vec![0, 1, 2]).unwrap();
        let r = x.restrict(&[0, 2]).unwrap();
        assert_eq!(r.base_length(), 1);
        assert_eq!(r.total().num_morphisms(), 3);
    }
}
