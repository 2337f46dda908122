//! Functors between finite categories and exhaustive functor search.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::category::{FinCat, Mor, Obj};
use crate::error::CategoryError;

/// A functor given by explicit object and morphism maps.
#[derive(Clone, Debug)]
pub struct FunctorData {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    obj_map: Vec<Obj>,
    mor_map: Vec<Mor>,
}

impl PartialEq for FunctorData {
    fn eq(&self, other: &Self) -> bool {
        self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
            && same_cat(&self.source, &other.source)
            && same_cat(&self.target, &other.target)
    }
}

impl Eq for FunctorData {}

pub(crate) fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Checks that the maps define a functor and describes the first failure.
pub fn check_functor(source: &FinCat, target: &FinCat, obj_map: &[Obj], mor_map: &[Mor]) -> Result<(), String> {
    if obj_map.len() != source.num_objects() {
        return Err(format!("object map has {} entries, expected {}", obj_map.len(), source.num_objects()));
    }
    if mor_map.len() != source.num_morphisms() {
        return Err(format!("morphism map has {} entries, expected {}", mor_map.len(), source.num_morphisms()));
    }
    if let Some(&y) = obj_map.iter().find(|&&y| y >= target.num_objects()) {
        return Err(format!("unknown target object {y}"));
    }
    for m in source.morphisms() {
        let fm = mor_map[m];
        if fm >= target.num_morphisms() {
            return Err(format!("unknown target morphism {fm}"));
        }
        if target.src(fm) != obj_map[source.src(m)] {
            return Err(format!("src mismatch at {}", source.morphism_name(m)));
        }
        if target.tgt(fm) != obj_map[source.tgt(m)] {
            return Err(format!("tgt mismatch at {}", source.morphism_name(m)));
        }
    }
    for x in source.objects() {
        if mor_map[source.identity(x)] != target.identity(obj_map[x]) {
            return Err(format!("identity of {} not preserved", source.object_name(x)));
        }
    }
    for g in source.morphisms() {
        for f in source.morphisms() {
            if let Some(h) = source.try_compose(g, f) {
                if target.compose(mor_map[g], mor_map[f]) != mor_map[h] {
                    return Err(format!(
                        "composition {} . {} not preserved",
                        source.morphism_name(g),
                        source.morphism_name(f)
                    ));
                }
            }
        }
    }
    Ok(())
}

impl FunctorData {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Result<Self, CategoryError> {
        check_functor(&source, &target, &obj_map, &mor_map).map_err(CategoryError::NotAFunctor)?;
        Ok(Self { source, target, obj_map, mor_map })
    }

    /// Skips validation; callers guarantee functoriality.
    pub(crate) fn new_unchecked(source: Arc<FinCat>, target: Arc<FinCat>, obj_map: Vec<Obj>, mor_map: Vec<Mor>) -> Self {
        debug_assert!(
            check_functor(&source, &target, &obj_map, &mor_map).is_ok(),
            "{:?}",
            check_functor(&source, &target, &obj_map, &mor_map)
        );
        Self { source, target, obj_map, mor_map }
    }

    pub fn identity(cat: Arc<FinCat>) -> Self {
        let obj_map = cat.objects().collect();
        let mor_map = cat.morphisms().collect();
        Self { source: cat.clone(), target: cat, obj_map, mor_map }
    }

    /// The functor that is constant at object `y`.
    pub fn constant(source: Arc<FinCat>, target: Arc<FinCat>, y: Obj) -> Self {
        let obj_map = vec![y; source.num_objects()];
        let mor_map = vec![target.identity(y); source.num_morphisms()];
        Self { source, target, obj_map, mor_map }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn obj(&self, x: Obj) -> Obj {
        self.obj_map[x]
    }

    pub fn mor(&self, m: Mor) -> Mor {
        self.mor_map[m]
    }

    pub fn obj_map(&self) -> &[Obj] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[Mor] {
        &self.mor_map
    }

    pub fn check(&self) -> Result<(), String> {
        check_functor(&self.source, &self.target, &self.obj_map, &self.mor_map)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FunctorData) -> Result<FunctorData, CategoryError> {
        if !same_cat(&self.target, &other.source) {
            return Err(CategoryError::NotAFunctor("composite of non-composable functors".into()));
        }
        Ok(self.then_unchecked(other))
    }

    pub(crate) fn then_unchecked(&self, other: &FunctorData) -> FunctorData {
        FunctorData {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&x| other.obj(x)).collect(),
            mor_map: self.mor_map.iter().map(|&m| other.mor(m)).collect(),
        }
    }

    /// Replaces source/target by structurally equal categories.
    pub fn rebase(&self, source: Arc<FinCat>, target: Arc<FinCat>) -> FunctorData {
        debug_assert!(source.same_table(&self.source) && target.same_table(&self.target));
        FunctorData { source, target, obj_map: self.obj_map.clone(), mor_map: self.mor_map.clone() }
    }

    /// The opposite functor `C^op → D^op`.
    pub fn dual(&self) -> FunctorData {
        FunctorData {
            source: Arc::new(self.source.opposite()),
            target: Arc::new(self.target.opposite()),
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }

    /// Like [`FunctorData::dual`] with caller-supplied opposite categories.
    pub fn dual_with(&self, source_op: Arc<FinCat>, target_op: Arc<FinCat>) -> FunctorData {
        FunctorData { source: source_op, target: target_op, obj_map: self.obj_map.clone(), mor_map: self.mor_map.clone() }
    }

    pub fn is_fully_faithful(&self) -> bool {
        fully_faithful_failure(self).is_none()
    }

    pub fn is_bijective(&self) -> bool {
        is_bijection(&self.obj_map, self.target.num_objects()) && is_bijection(&self.mor_map, self.target.num_morphisms())
    }
}

/// The opposite of a functor.
pub fn dual_functor(f: &FunctorData) -> FunctorData {
    f.dual()
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    map.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
}

fn fully_faithful_failure(f: &FunctorData) -> Option<(Obj, Obj)> {
    let (c, d) = (f.source(), f.target());
    for x in c.objects() {
        for y in c.objects() {
            let image = d.hom(f.obj(x), f.obj(y));
            let hom = c.hom(x, y);
            if hom.len() != image.len() {
                return Some((x, y));
            }
            let mut mapped: Vec<Mor> = hom.iter().map(|&m| f.mor(m)).collect();
            mapped.sort_unstable();
            mapped.dedup();
            if mapped.len() != image.len() {
                return Some((x, y));
            }
        }
    }
    None
}

/// Certificate that a functor is an equivalence of categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    /// For each target object `y`, a source object `x` and an isomorphism
    /// `F(x) → y`, chosen with least indices.
    pub essential_images: Vec<(Obj, Mor)>,
}

/// Fully faithful plus essentially surjective; `None` otherwise.
pub fn check_equivalence(f: &FunctorData) -> Option<EquivalenceWitness> {
    if fully_faithful_failure(f).is_some() {
        return None;
    }
    let d = f.target();
    let mut essential_images = Vec::with_capacity(d.num_objects());
    for y in d.objects() {
        let found = f.source().objects().find_map(|x| {
            d.hom(f.obj(x), y).iter().copied().find(|&m| d.is_iso(m)).map(|m| (x, m))
        })?;
        essential_images.push(found);
    }
    Some(EquivalenceWitness { essential_images })
}

/// A quasi-inverse built from an equivalence witness.
pub fn quasi_inverse(f: &FunctorData, witness: &EquivalenceWitness) -> FunctorData {
    let (c, d) = (f.source().clone(), f.target().clone());
    let obj_map: Vec<Obj> = witness.essential_images.iter().map(|&(x, _)| x).collect();
    let mor_map = d
        .morphisms()
        .map(|m| {
            let (y, y2) = (d.src(m), d.tgt(m));
            let (x, e) = witness.essential_images[y];
            let (x2, e2) = witness.essential_images[y2];
            let e2_inv = d.inverse(e2).expect("witness isomorphism");
            let wanted = d.compose(e2_inv, d.compose(m, e));
            c.hom(x, x2).iter().copied().find(|&n| f.mor(n) == wanted).expect("fully faithful")
        })
        .collect();
    FunctorData::new_unchecked(d, c, obj_map, mor_map)
}

/// Constraints for [`FunctorSearch`].
#[derive(Clone, Debug)]
pub struct FunctorSearch<'a> {
    source: &'a FinCat,
    target: &'a FinCat,
    allowed_objects: Vec<Vec<Obj>>,
    fixed_morphisms: Vec<Option<Mor>>,
    injective: bool,
}

impl<'a> FunctorSearch<'a> {
    pub fn new(source: &'a FinCat, target: &'a FinCat) -> Self {
        Self {
            source,
            target,
            allowed_objects: vec![target.objects().collect(); source.num_objects()],
            fixed_morphisms: vec![None; source.num_morphisms()],
            injective: false,
        }
    }

    pub fn allow_objects(mut self, x: Obj, allowed: Vec<Obj>) -> Self {
        self.allowed_objects[x] = allowed;
        self
    }

    pub fn fix_object(self, x: Obj, y: Obj) -> Self {
        self.allow_objects(x, vec![y])
    }

    pub fn fix_morphism(mut self, m: Mor, image: Mor) -> Self {
        self.fixed_morphisms[m] = Some(image);
        self
    }

    /// Only injective maps on objects and morphisms.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    /// Visits every functor satisfying the constraints, in canonical order
    /// (lexicographic in object images, then morphism images).
    pub fn for_each(&self, mut visit: impl FnMut(&[Obj], &[Mor]) -> ControlFlow<()>) {
        let (c, d) = (self.source, self.target);
        if self.injective && (c.num_objects() > d.num_objects() || c.num_morphisms() > d.num_morphisms()) {
            return;
        }
        let n = c.num_morphisms();
        // triples (g, f, g∘f) keyed by their largest index
        let mut triples: Vec<Vec<(Mor, Mor, Mor)>> = vec![Vec::new(); n];
        for g in c.morphisms() {
            for f in c.morphisms() {
                if let Some(h) = c.try_compose(g, f) {
                    triples[g.max(f).max(h)].push((g, f, h));
                }
            }
        }
        // morphisms whose endpoints are both fixed once object x is assigned
        let mut by_object: Vec<Vec<Mor>> = vec![Vec::new(); c.num_objects()];
        for m in c.morphisms() {
            by_object[c.src(m).max(c.tgt(m))].push(m);
        }
        let mut state = SearchState {
            obj_map: vec![usize::MAX; c.num_objects()],
            mor_map: vec![usize::MAX; n],
            obj_used: vec![false; d.num_objects()],
            mor_used: vec![false; d.num_morphisms()],
        };
        let _ = self.assign_object(0, &by_object, &triples, &mut state, &mut visit);
    }

    fn assign_object(
        &self,
        x: Obj,
        by_object: &[Vec<Mor>],
        triples: &[Vec<(Mor, Mor, Mor)>],
        st: &mut SearchState,
        visit: &mut impl FnMut(&[Obj], &[Mor]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (c, d) = (self.source, self.target);
        if x == c.num_objects() {
            return self.assign_morphism(0, triples, st, visit);
        }
        for &y in &self.allowed_objects[x] {
            if self.injective && st.obj_used[y] {
                continue;
            }
            st.obj_map[x] = y;
            let feasible = by_object[x].iter().all(|&m| {
                let hom = d.hom(st.obj_map[c.src(m)], st.obj_map[c.tgt(m)]);
                if self.injective {
                    hom.len() == c.hom(c.src(m), c.tgt(m)).len()
                } else {
                    !hom.is_empty()
                }
            });
            if !feasible {
                continue;
            }
            st.obj_used[y] = true;
            let flow = self.assign_object(x + 1, by_object, triples, st, visit);
            st.obj_used[y] = false;
            flow?;
        }
        st.obj_map[x] = usize::MAX;
        ControlFlow::Continue(())
    }

    fn assign_morphism(
        &self,
        m: Mor,
        triples: &[Vec<(Mor, Mor, Mor)>],
        st: &mut SearchState,
        visit: &mut impl FnMut(&[Obj], &[Mor]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (c, d) = (self.source, self.target);
        if m == c.num_morphisms() {
            return visit(&st.obj_map, &st.mor_map);
        }
        let (sx, tx) = (st.obj_map[c.src(m)], st.obj_map[c.tgt(m)]);
        let forced = if c.is_identity(m) { Some(d.identity(sx)) } else { self.fixed_morphisms[m] };
        let single;
        let candidates: &[Mor] = match forced {
            Some(image) => {
                if d.src(image) != sx || d.tgt(image) != tx {
                    return ControlFlow::Continue(());
                }
                single = [image];
                &single
            }
            None => d.hom(sx, tx),
        };
        for &image in candidates {
            if self.injective && st.mor_used[image] {
                continue;
            }
            st.mor_map[m] = image;
            let consistent = triples[m]
                .iter()
                .all(|&(g, f, h)| d.compose(st.mor_map[g], st.mor_map[f]) == st.mor_map[h]);
            if consistent {
                st.mor_used[image] = true;
                let flow = self.assign_morphism(m + 1, triples, st, visit);
                st.mor_used[image] = false;
                flow?;
            }
        }
        st.mor_map[m] = usize::MAX;
        ControlFlow::Continue(())
    }

    pub fn collect(&self, source: &Arc<FinCat>, target: &Arc<FinCat>) -> Vec<FunctorData> {
        let mut out = Vec::new();
        self.for_each(|o, m| {
            out.push(FunctorData {
                source: source.clone(),
                target: target.clone(),
                obj_map: o.to_vec(),
                mor_map: m.to_vec(),
            });
            ControlFlow::Continue(())
        });
        out
    }

    pub fn first(&self, source: &Arc<FinCat>, target: &Arc<FinCat>) -> Option<FunctorData> {
        let mut out = None;
        self.for_each(|o, m| {
            out = Some(FunctorData {
                source: source.clone(),
                target: target.clone(),
                obj_map: o.to_vec(),
                mor_map: m.to_vec(),
            });
            ControlFlow::Break(())
        });
        out
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each(|_, _| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }
}

struct SearchState {
    obj_map: Vec<Obj>,
    mor_map: Vec<Mor>,
    obj_used: Vec<bool>,
    mor_used: Vec<bool>,
}

/// Every functor `source → target`.
pub fn all_functors(source: &Arc<FinCat>, target: &Arc<FinCat>) -> Vec<FunctorData> {
    FunctorSearch::new(source, target).collect(source, target)
}

/// Per-object signature used to prune isomorphism search.
fn object_signature(c: &FinCat, x: Obj) -> (usize, Vec<usize>, Vec<usize>) {
    let mut out: Vec<usize> = c.objects().map(|y| c.hom(x, y).len()).collect();
    let mut inc: Vec<usize> = c.objects().map(|y| c.hom(y, x).len()).collect();
    out.sort_unstable();
    inc.sort_unstable();
    (c.hom(x, x).len(), out, inc)
}

/// An isomorphism of categories `a → b`, if one exists.
pub fn find_isomorphism(a: &Arc<FinCat>, b: &Arc<FinCat>) -> Option<FunctorData> {
    find_isomorphism_with(a, b, |_, _| true)
}

/// An isomorphism `a → b` whose object map satisfies `allowed(x, y)`.
pub fn find_isomorphism_with(
    a: &Arc<FinCat>,
    b: &Arc<FinCat>,
    allowed: impl Fn(Obj, Obj) -> bool,
) -> Option<FunctorData> {
    if a.num_objects() != b.num_objects() || a.num_morphisms() != b.num_morphisms() {
        return None;
    }
    let sig_b: Vec<_> = b.objects().map(|y| object_signature(b, y)).collect();
    let mut search = FunctorSearch::new(a, b).injective();
    for x in a.objects() {
        let sx = object_signature(a, x);
        let cands = b.objects().filter(|&y| sig_b[y] == sx && allowed(x, y)).collect();
        search = search.allow_objects(x, cands);
    }
    search.first(a, b)
}
