//! The Grothendieck constructions `E_f` (cocartesian) and `F_f`
//! (cartesian), and the chain version for composable sequences.

use std::sync::Arc;

use super::build::{build_over_chain, Cross};
use super::Correspondence;
use crate::category::{FinCat, Mor, Obj};
use crate::error::CorrespondenceError;
use crate::functor::{same_cat, FunctorData};

/// Cross data of a chain `C_0 → C_1 → … → C_n`: an element of block
/// `(i, j)` is a pair `(x, m)` with `x ∈ C_i` and `m: F(x) → y` in `C_j`.
struct ChainCross {
    fibers: Vec<Arc<FinCat>>,
    /// `maps[i][j]` = (object map, morphism map) of `C_i → C_j`, `i ≤ j`.
    maps: Vec<Vec<(Vec<Obj>, Vec<Mor>)>>,
    elements: Vec<Vec<Vec<(Obj, Mor)>>>,
    /// `index[i][j][x * |Mor C_j| + m]`.
    index: Vec<Vec<Vec<usize>>>,
}

impl ChainCross {
    fn new(functors: &[FunctorData]) -> Self {
        let n = functors.len();
        let mut fibers = vec![functors[0].source().clone()];
        fibers.extend(functors.iter().map(|f| f.target().clone()));
        let mut maps = vec![vec![(Vec::new(), Vec::new()); n + 1]; n + 1];
        for i in 0..=n {
            maps[i][i] = (fibers[i].objects().collect(), fibers[i].morphisms().collect());
            for j in i + 1..=n {
                let f = &functors[j - 1];
                let (objs, mors) = &maps[i][j - 1];
                maps[i][j] = (objs.iter().map(|&x| f.obj(x)).collect(), mors.iter().map(|&m| f.mor(m)).collect());
            }
        }
        let mut elements = vec![vec![Vec::new(); n + 1]; n + 1];
        let mut index = vec![vec![Vec::new(); n + 1]; n + 1];
        for i in 0..=n {
            for j in i + 1..=n {
                let (ci, cj) = (&fibers[i], &fibers[j]);
                let mut idx = vec![usize::MAX; ci.num_objects() * cj.num_morphisms()];
                let mut els = Vec::new();
                for x in ci.objects() {
                    let fx = maps[i][j].0[x];
                    for m in cj.morphisms().filter(|&m| cj.src(m) == fx) {
                        idx[x * cj.num_morphisms() + m] = els.len();
                        els.push((x, m));
                    }
                }
                elements[i][j] = els;
                index[i][j] = idx;
            }
        }
        Self { fibers, maps, elements, index }
    }

    fn lookup(&self, i: usize, j: usize, x: Obj, m: Mor) -> usize {
        self.index[i][j][x * self.fibers[j].num_morphisms() + m]
    }
}

impl Cross for ChainCross {
    fn block(&self, i: usize, j: usize) -> Vec<(Obj, Obj, String)> {
        let (ci, cj) = (&self.fibers[i], &self.fibers[j]);
        self.elements[i][j]
            .iter()
            .map(|&(x, m)| (x, cj.tgt(m), format!("{}@{}", cj.morphism_name(m), ci.object_name(x))))
            .collect()
    }

    fn post(&self, i: usize, j: usize, d: Mor, e: usize) -> usize {
        let (x, m) = self.elements[i][j][e];
        self.lookup(i, j, x, self.fibers[j].compose(d, m))
    }

    fn pre(&self, i: usize, j: usize, e: usize, c: Mor) -> usize {
        let (_, m) = self.elements[i][j][e];
        let (ci, cj) = (&self.fibers[i], &self.fibers[j]);
        self.lookup(i, j, ci.src(c), cj.compose(m, self.maps[i][j].1[c]))
    }

    fn comp(&self, i: usize, j: usize, k: usize, e2: usize, e1: usize) -> usize {
        let (x, m1) = self.elements[i][j][e1];
        let (_, m2) = self.elements[j][k][e2];
        let ck = &self.fibers[k];
        self.lookup(i, k, x, ck.compose(m2, self.maps[j][k].1[m1]))
    }
}

/// The cocartesian fibration over `[n]` classified by a composable chain
/// of functors: `Hom(x_i, y_j) = Hom_{C_j}(F_{j←i}(x), y)`.
pub fn grothendieck_chain(functors: &[FunctorData]) -> Result<Correspondence, CorrespondenceError> {
    if functors.is_empty() {
        return Err(CorrespondenceError::BadBase { expected: 1, found: 0 });
    }
    if functors.windows(2).any(|w| !same_cat(w[0].target(), w[1].source())) {
        return Err(CorrespondenceError::BoundaryMismatch);
    }
    let cross = ChainCross::new(functors);
    Ok(build_over_chain(&cross.fibers, &cross))
}

/// `E_f` over `[1]`: objects `C ⊔ D`, `Hom(x, y) = Hom_D(f(x), y)` for
/// `x ∈ C, y ∈ D` and no morphisms from `D` back to `C`.
pub fn grothendieck_cocart(f: &FunctorData) -> Correspondence {
    grothendieck_chain(std::slice::from_ref(f)).expect("single functor")
}

/// `F_f` over `[1]`: fiber `D` at 0, `C` at 1, `Hom(y, x) = Hom_D(y, f(x))`.
/// Obtained as the reoriented opposite of `E_{f^op}`.
pub fn grothendieck_cart(f: &FunctorData) -> Correspondence {
    let e = grothendieck_cocart(&f.dual());
    let op = e.opposite();
    let fibers = vec![f.target().clone(), f.source().clone()];
    Correspondence::with_fibers(op.total().clone(), 1, op.degrees().to_vec(), fibers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn id_arrow() -> FunctorData {
        FunctorData::identity(Arc::new(catalog::arrow()))
    }

    #[test]
    fn cocart_of_identity_on_arrow() {
        let e = grothendieck_cocart(&id_arrow());
        let t = e.total();
        let (c0, c1, d0, d1) = (e.global(0, 0), e.global(0, 1), e.global(1, 0), e.global(1, 1));
        assert_eq!(t.hom(c0, d1).len(), 1);
        assert_eq!(t.morphism_name(t.hom(c0, d1)[0]), "u@0");
        assert!(t.hom(d0, c1).is_empty());
        assert_eq!(t.hom(c1, d0).len(), 0);
        assert_eq!(**e.fiber_cat(0), catalog::arrow());
    }

    #[test]
    fn cocart_of_terminal_is_arrow() {
        let t = Arc::new(catalog::terminal());
        let e = grothendieck_cocart(&FunctorData::identity(t));
        assert!(crate::functor::find_isomorphism(e.total(), &Arc::new(catalog::arrow())).is_some());
    }

    #[test]
    fn cocart_of_arrow_to_terminal() {
        let f = FunctorData::constant(Arc::new(catalog::arrow()), Arc::new(catalog::terminal()), 0);
        let e = grothendieck_cocart(&f);
        assert_eq!(e.total().num_objects(), 3);
        assert_eq!(e.total().num_morphisms(), 6);
    }

    #[test]
    fn cart_of_identity_on_arrow() {
        let f = grothendieck_cart(&id_arrow());
        let t = f.total();
        // D at level 0, C at level 1
        let (d0, c1) = (f.global(0, 0), f.global(1, 1));
        assert_eq!(t.hom(d0, c1).len(), 1);
        assert_eq!(**f.fiber_cat(0), catalog::arrow());
        assert!(t.hom(f.global(1, 0), f.global(0, 0)).is_empty());
    }

    #[test]
    fn cart_of_terminal_is_arrow() {
        let t = Arc::new(catalog::terminal());
        let f = grothendieck_cart(&FunctorData::identity(t));
        assert!(crate::functor::find_isomorphism(f.total(), &Arc::new(catalog::arrow())).is_some());
    }

    #[test]
    fn chain_of_two_has_composite_homs() {
        let c = Arc::new(catalog::arrow());
        let id = FunctorData::identity(c);
        let e = grothendieck_chain(&[id.clone(), id]).unwrap();
        let t = e.total();
        assert_eq!(t.hom(e.global(0, 0), e.global(2, 1)).len(), 1);
        assert_eq!(t.hom(e.global(0, 1), e.global(2, 0)).len(), 0);
    }
}
