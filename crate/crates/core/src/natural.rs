//! Natural transformations between parallel functors.

use crate::category::{Mor, Obj};
use crate::error::CategoryError;
use crate::functor::{same_cat, FunctorData};

/// A natural transformation `source ⇒ target` with one component per
/// object of the common domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub source: FunctorData,
    pub target: FunctorData,
    pub components: Vec<Mor>,
}

fn parallel(f: &FunctorData, g: &FunctorData) -> bool {
    same_cat(f.source(), g.source()) && same_cat(f.target(), g.target())
}

impl NatTrans {
    pub fn new(source: FunctorData, target: FunctorData, components: Vec<Mor>) -> Result<Self, CategoryError> {
        if !parallel(&source, &target) {
            return Err(CategoryError::NotParallel);
        }
        let t = NatTrans { source, target, components };
        if let Some(m) = t.first_unnatural() {
            return Err(CategoryError::NotAFunctor(format!(
                "naturality fails at {}",
                t.source.source().morphism_name(m)
            )));
        }
        Ok(t)
    }

    pub fn identity(f: &FunctorData) -> Self {
        let d = f.target();
        let components = f.source().objects().map(|x| d.identity(f.obj(x))).collect();
        NatTrans { source: f.clone(), target: f.clone(), components }
    }

    pub fn component(&self, x: Obj) -> Mor {
        self.components[x]
    }

    fn first_unnatural(&self) -> Option<Mor> {
        let (c, d) = (self.source.source(), self.source.target());
        for x in c.objects() {
            let e = self.components[x];
            if d.src(e) != self.source.obj(x) || d.tgt(e) != self.target.obj(x) {
                return Some(c.identity(x));
            }
        }
        c.morphisms().find(|&m| {
            let (x, y) = (c.src(m), c.tgt(m));
            d.compose(self.target.mor(m), self.components[x]) != d.compose(self.components[y], self.source.mor(m))
        })
    }

    pub fn is_natural(&self) -> bool {
        self.first_unnatural().is_none()
    }

    pub fn is_iso(&self) -> bool {
        let d = self.source.target();
        self.components.iter().all(|&e| d.is_iso(e))
    }

    /// Vertical composite `other ∘ self`.
    pub fn then(&self, other: &NatTrans) -> NatTrans {
        let d = self.source.target();
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(&a, &b)| d.compose(b, a))
            .collect();
        NatTrans { source: self.source.clone(), target: other.target.clone(), components }
    }

    /// Whiskering `h · self` for `h` out of the common target.
    pub fn whisker_left(&self, h: &FunctorData) -> NatTrans {
        NatTrans {
            source: self.source.then_unchecked(h),
            target: self.target.then_unchecked(h),
            components: self.components.iter().map(|&e| h.mor(e)).collect(),
        }
    }

    /// Whiskering `self · k` for `k` into the common source.
    pub fn whisker_right(&self, k: &FunctorData) -> NatTrans {
        NatTrans {
            source: k.then_unchecked(&self.source),
            target: k.then_unchecked(&self.target),
            components: k.obj_map().iter().map(|&x| self.components[x]).collect(),
        }
    }

    /// The inverse of an invertible transformation.
    pub fn inverse(&self) -> Option<NatTrans> {
        let d = self.source.target();
        let components = self.components.iter().map(|&e| d.inverse(e)).collect::<Option<Vec<_>>>()?;
        Some(NatTrans { source: self.target.clone(), target: self.source.clone(), components })
    }
}

/// Visits natural transformations `f ⇒ g` in canonical order; the
/// visitor returns `false` to stop.
pub fn for_each_natural_transformation(
    f: &FunctorData,
    g: &FunctorData,
    only_isos: bool,
    mut visit: impl FnMut(&[Mor]) -> bool,
) -> Result<(), CategoryError> {
    if !parallel(f, g) {
        return Err(CategoryError::NotParallel);
    }
    let (c, d) = (f.source(), f.target());
    let mut by_object: Vec<Vec<Mor>> = vec![Vec::new(); c.num_objects()];
    for m in c.morphisms() {
        by_object[c.src(m).max(c.tgt(m))].push(m);
    }
    let candidates: Vec<Vec<Mor>> = c
        .objects()
        .map(|x| {
            d.hom(f.obj(x), g.obj(x))
                .iter()
                .copied()
                .filter(|&e| !only_isos || d.is_iso(e))
                .collect()
        })
        .collect();
    let mut comps = vec![usize::MAX; c.num_objects()];
    fn go(
        x: Obj,
        f: &FunctorData,
        g: &FunctorData,
        candidates: &[Vec<Mor>],
        by_object: &[Vec<Mor>],
        comps: &mut Vec<Mor>,
        visit: &mut impl FnMut(&[Mor]) -> bool,
    ) -> bool {
        let (c, d) = (f.source(), f.target());
        if x == c.num_objects() {
            return visit(comps);
        }
        for &e in &candidates[x] {
            comps[x] = e;
            let ok = by_object[x].iter().all(|&m| {
                let (a, b) = (c.src(m), c.tgt(m));
                d.compose(g.mor(m), comps[a]) == d.compose(comps[b], f.mor(m))
            });
            if ok && !go(x + 1, f, g, candidates, by_object, comps, visit) {
                return false;
            }
        }
        true
    }
    go(0, f, g, &candidates, &by_object, &mut comps, &mut visit);
    Ok(())
}

/// Every natural transformation `f ⇒ g`.
pub fn natural_transformations(f: &FunctorData, g: &FunctorData) -> Result<Vec<NatTrans>, CategoryError> {
    let mut out = Vec::new();
    for_each_natural_transformation(f, g, false, |comps| {
        out.push(NatTrans { source: f.clone(), target: g.clone(), components: comps.to_vec() });
        true
    })?;
    Ok(out)
}

/// The first natural isomorphism `f ⇒ g` in canonical order.
pub fn find_natural_iso(f: &FunctorData, g: &FunctorData) -> Option<NatTrans> {
    let mut out = None;
    for_each_natural_transformation(f, g, true, |comps| {
        out = Some(NatTrans { source: f.clone(), target: g.clone(), components: comps.to_vec() });
        false
    })
    .ok()?;
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog;

    /// Independent count: all component tuples, filtered by naturality.
    fn brute_force_count(f: &FunctorData, g: &FunctorData) -> usize {
        let c = f.source();
        let d = f.target();
        let homs: Vec<&[Mor]> = c.objects().map(|x| d.hom(f.obj(x), g.obj(x))).collect();
        let mut count = 0;
        let mut idx = vec![0usize; homs.len()];
        if homs.iter().any(|h| h.is_empty()) {
            return 0;
        }
        loop {
            let comps: Vec<Mor> = idx.iter().zip(&homs).map(|(&i, h)| h[i]).collect();
            let t = NatTrans { source: f.clone(), target: g.clone(), components: comps };
            if t.is_natural() {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return count;
                }
                idx[k] += 1;
                if idx[k] < homs[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn identity_on_arrow_has_one_transformation() {
        let a = Arc::new(catalog::arrow());
        let id = FunctorData::identity(a);
        assert_eq!(natural_transformations(&id, &id).unwrap().len(), 1);
    }

    #[test]
    fn points_of_arrow() {
        let t = Arc::new(catalog::terminal());
        let a = Arc::new(catalog::arrow());
        let zero = FunctorData::constant(t.clone(), a.clone(), 0);
        let one = FunctorData::constant(t, a, 1);
        let forward = natural_transformations(&zero, &one).unwrap();
        assert_eq!(forward.len(), 1);
        assert_eq!(forward[0].components, vec![catalog::ARROW_U]);
        assert!(natural_transformations(&one, &zero).unwrap().is_empty());
    }

    #[test]
    fn constant_into_discrete() {
        let d = Arc::new(catalog::discrete(2));
        let c = Arc::new(catalog::arrow());
        let k = FunctorData::constant(c, d, 1);
        assert_eq!(natural_transformations(&k, &k).unwrap().len(), 1);
    }

    #[test]
    fn not_parallel_is_an_error() {
        let a = Arc::new(catalog::arrow());
        let t = Arc::new(catalog::terminal());
        let f = FunctorData::identity(a);
        let g = FunctorData::identity(t);
        assert_eq!(natural_transformations(&f, &g), Err(CategoryError::NotParallel));
    }

    #[test]
    fn counts_match_brute_force_on_pool() {
        let pool: Vec<Arc<_>> = catalog::small_pool(12).into_iter().map(Arc::new).collect();
        let mut checked = 0;
        for c in pool.iter().take(8) {
            for d in pool.iter().take(10) {
                let functors = crate::functor::all_functors(c, d);
                for f in functors.iter().take(4) {
                    for g in functors.iter().take(4) {
                        assert_eq!(natural_transformations(f, g).unwrap().len(), brute_force_count(f, g));
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 50);
    }
}
