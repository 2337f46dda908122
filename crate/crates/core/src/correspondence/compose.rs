//! Gluing two correspondences along a shared fiber, composition, and the
//! flatness test over `[2]`.

use std::collections::HashMap;

use super::build::{build_over_chain, Cross, TotalCross};
use super::Correspondence;
use crate::category::{Mor, Obj};
use crate::error::CorrespondenceError;
use crate::util::UnionFind;

/// Cross data of `X ⊔^D Y` over `[2]`. Block `(0, 2)` is the coend
/// `∫^{d ∈ D} X(x, d) × Y(d, z)`.
struct GlueCross<'a> {
    x: TotalCross<'a>,
    y: TotalCross<'a>,
    /// Pairs `(e1, e2)` of block positions, in enumeration order.
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
    class_of: Vec<usize>,
    /// Least pair per class.
    reps: Vec<usize>,
    xc: &'a Correspondence,
    yc: &'a Correspondence,
}

impl<'a> GlueCross<'a> {
    fn new(xc: &'a Correspondence, yc: &'a Correspondence) -> Self {
        let x = TotalCross::new(xc);
        let y = TotalCross::new(yc);
        let (tx, ty) = (xc.total(), yc.total());
        let mut pairs = Vec::new();
        let mut pair_index = HashMap::new();
        for (e1, &m1) in x.members(0, 1).iter().enumerate() {
            let d = xc.local(tx.tgt(m1));
            for (e2, &m2) in y.members(0, 1).iter().enumerate() {
                if yc.local(ty.src(m2)) == d {
                    pair_index.insert((e1, e2), pairs.len());
                    pairs.push((e1, e2));
                }
            }
        }
        let shared = xc.fiber_cat(1);
        let mut uf = UnionFind::new(pairs.len());
        for (p, &(e1, e2)) in pairs.iter().enumerate() {
            // (m ∘ e1, e2') ~ (e1, e2' ∘ m) for m out of the middle object
            let d = xc.local(tx.tgt(x.members(0, 1)[e1]));
            for m in shared.morphisms().filter(|&m| shared.src(m) == d) {
                let moved = x.post(0, 1, m, e1);
                for (e2b, &m2) in y.members(0, 1).iter().enumerate() {
                    if yc.local(ty.src(m2)) == shared.tgt(m) && y.pre(0, 1, e2b, m) == e2 {
                        uf.union(p, pair_index[&(moved, e2b)]);
                    }
                }
            }
        }
        let (class_of, count) = uf.classes();
        let mut reps = vec![usize::MAX; count];
        for (p, &c) in class_of.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = p;
            }
        }
        Self { x, y, pairs, pair_index, class_of, reps, xc, yc }
    }

    fn class(&self, e1: usize, e2: usize) -> usize {
        self.class_of[self.pair_index[&(e1, e2)]]
    }
}

impl Cross for GlueCross<'_> {
    fn block(&self, i: usize, j: usize) -> Vec<(Obj, Obj, String)> {
        match (i, j) {
            (0, 1) => self.x.block(0, 1),
            (1, 2) => self.y.block(0, 1),
            _ => {
                let (tx, ty) = (self.xc.total(), self.yc.total());
                self.reps
                    .iter()
                    .map(|&p| {
                        let (e1, e2) = self.pairs[p];
                        let (m1, m2) = (self.x.members(0, 1)[e1], self.y.members(0, 1)[e2]);
                        (
                            self.xc.local(tx.src(m1)),
                            self.yc.local(ty.tgt(m2)),
                            format!("{}.{}", ty.morphism_name(m2), tx.morphism_name(m1)),
                        )
                    })
                    .collect()
            }
        }
    }

    fn post(&self, i: usize, j: usize, d: Mor, e: usize) -> usize {
        match (i, j) {
            (0, 1) => self.x.post(0, 1, d, e),
            (1, 2) => self.y.post(0, 1, d, e),
            _ => {
                let (e1, e2) = self.pairs[self.reps[e]];
                self.class(e1, self.y.post(0, 1, d, e2))
            }
        }
    }

    fn pre(&self, i: usize, j: usize, e: usize, c: Mor) -> usize {
        match (i, j) {
            (0, 1) => self.x.pre(0, 1, e, c),
            (1, 2) => self.y.pre(0, 1, e, c),
            _ => {
                let (e1, e2) = self.pairs[self.reps[e]];
                self.class(self.x.pre(0, 1, e1, c), e2)
            }
        }
    }

    fn comp(&self, _i: usize, _j: usize, _k: usize, e2: usize, e1: usize) -> usize {
        self.class(e1, e2)
    }
}

/// The correspondence over `[2]` obtained by gluing `x` and `y` along
/// `fiber_1(x) = fiber_0(y)`.
pub fn glue(x: &Correspondence, y: &Correspondence) -> Result<Correspondence, CorrespondenceError> {
    x.require_base(1)?;
    y.require_base(1)?;
    if **x.fiber_cat(1) != **y.fiber_cat(0) {
        return Err(CorrespondenceError::BoundaryMismatch);
    }
    let cross = GlueCross::new(x, y);
    let fibers = [x.fiber_cat(0).clone(), x.fiber_cat(1).clone(), y.fiber_cat(1).clone()];
    Ok(build_over_chain(&fibers, &cross))
}

/// `Y ∘ X`: the outer levels of the glued correspondence, with cross homs
/// the coend over the shared fiber.
pub fn compose_correspondences(x: &Correspondence, y: &Correspondence) -> Result<Correspondence, CorrespondenceError> {
    glue(x, y)?.restrict(&[0, 2])
}

/// Whether the canonical map from the coend of the two intermediate hom
/// families to `Hom(x, z)` is a bijection for every `x` of degree 0 and `z`
/// of degree 2.
pub fn check_flat_over_triangle(x: &Correspondence) -> Result<bool, CorrespondenceError> {
    x.require_base(2)?;
    let t = x.total();
    let middle = x.fiber(1);
    for &a in x.objects_at(0) {
        for &c in x.objects_at(2) {
            let mut pairs = Vec::new();
            let mut index = HashMap::new();
            for &b in x.objects_at(1) {
                for &e1 in t.hom(a, b) {
                    for &e2 in t.hom(b, c) {
                        index.insert((e1, e2), pairs.len());
                        pairs.push((e1, e2));
                    }
                }
            }
            let mut uf = UnionFind::new(pairs.len());
            for (p, &(e1, e2)) in pairs.iter().enumerate() {
                let b = t.tgt(e1);
                for &m in &middle.morphisms {
                    if t.src(m) != b {
                        continue;
                    }
                    let moved = t.compose(m, e1);
                    for &e2b in t.hom(t.tgt(m), c) {
                        if t.compose(e2b, m) == e2 {
                            uf.union(p, index[&(moved, e2b)]);
                        }
                    }
                }
            }
            let (class_of, count) = uf.classes();
            let mut image = vec![usize::MAX; count];
            for (p, &(e1, e2)) in pairs.iter().enumerate() {
                let h = t.compose(e2, e1);
                if image[class_of[p]] == usize::MAX {
                    image[class_of[p]] = h;
                } else if image[class_of[p]] != h {
                    return Err(CorrespondenceError::Internal("composition is not balanced".into()));
                }
            }
            image.sort_unstable();
            image.dedup();
            if image.len() != count || count != t.hom(a, c).len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog;
    use crate::category::{chain, FinCat, MorphismInfo};
    use crate::correspondence::{find_iso_fixing_fibers, grothendieck_chain, grothendieck_cocart};
    use crate::functor::FunctorData;

    #[test]
    fn composition_of_grothendieck_constructions() {
        let c1 = Arc::new(catalog::arrow());
        let c2 = Arc::new(chain(2));
        // f: [1] → [2], 0 ↦ 0, 1 ↦ 2
        let f = FunctorData::new(c1, c2.clone(), vec![0, 2], vec![0, 2, 5]).unwrap();
        let g = FunctorData::identity(c2);
        let composed = compose_correspondences(&grothendieck_cocart(&f), &grothendieck_cocart(&g)).unwrap();
        let direct = grothendieck_cocart(&f.then(&g).unwrap());
        assert!(find_iso_fixing_fibers(&composed, &direct).is_some());
    }

    #[test]
    fn identity_correspondence_is_neutral() {
        let d = Arc::new(catalog::cospan());
        let f = FunctorData::constant(Arc::new(catalog::arrow()), d.clone(), 1);
        let x = grothendieck_cocart(&f);
        let id_c = grothendieck_cocart(&FunctorData::identity(f.source().clone()));
        let id_d = grothendieck_cocart(&FunctorData::identity(d));
        assert!(find_iso_fixing_fibers(&compose_correspondences(&id_c, &x).unwrap(), &x).is_some());
        assert!(find_iso_fixing_fibers(&compose_correspondences(&x, &id_d).unwrap(), &x).is_some());
    }

    #[test]
    fn mismatched_boundary() {
        let x = grothendieck_cocart(&FunctorData::identity(Arc::new(catalog::arrow())));
        let y = grothendieck_cocart(&FunctorData::identity(Arc::new(catalog::terminal())));
        assert_eq!(compose_correspondences(&x, &y), Err(CorrespondenceError::BoundaryMismatch));
    }

    #[test]
    fn chain_construction_is_flat() {
        let a = Arc::new(catalog::arrow());
        let f = FunctorData::constant(a.clone(), a.clone(), 1);
        let g = FunctorData::identity(a);
        let e = grothendieck_chain(&[f, g]).unwrap();
        assert!(check_flat_over_triangle(&e).unwrap());
    }

    #[test]
    fn extra_arrow_breaks_flatness() {
        // x → y → z plus a second x → z not factoring through y
        let objects = vec!["x".into(), "y".into(), "z".into()];
        let morphisms = vec![
            MorphismInfo { name: "id_x".into(), src: 0, tgt: 0 },
            MorphismInfo { name: "id_y".into(), src: 1, tgt: 1 },
            MorphismInfo { name: "id_z".into(), src: 2, tgt: 2 },
            MorphismInfo { name: "a".into(), src: 0, tgt: 1 },
            MorphismInfo { name: "b".into(), src: 1, tgt: 2 },
            MorphismInfo { name: "ba".into(), src: 0, tgt: 2 },
            MorphismInfo { name: "extra".into(), src: 0, tgt: 2 },
        ];
        let total = FinCat::try_from_fn(objects, morphisms, vec![0, 1, 2], |g, f| match (g, f) {
            (g, f) if g <= 2 => f,
            (g, f) if f <= 2 => g,
            (4, 3) => 5,
            _ => unreachable!(),
        })
        .unwrap();
        let x = Correspondence::new(Arc::new(total), 2, vec![0, 1, 2]).unwrap();
        assert!(!check_flat_over_triangle(&x).unwrap());
    }

    #[test]
    fn flatness_needs_base_two() {
        let x = grothendieck_cocart(&FunctorData::identity(Arc::new(catalog::arrow())));
        assert!(matches!(check_flat_over_triangle(&x), Err(CorrespondenceError::BadBase { .. })));
    }
}
