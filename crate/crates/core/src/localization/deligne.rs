//! Deligne's correspondence: cross homs `colim_{s: x′ → x} Hom_D(f x′, y)`
//! over the resolution categories, and its comparison with the
//! localization of `E_f`.

use std::collections::HashMap;

use super::correspondence::{localize_correspondence, marking_from_fibers, LocalizedCorrespondence};
use super::fractions::{check_right_fractions, resolution_category};
use crate::category::{FinCat, Mor, Obj};
use crate::correspondence::{build_over_chain, grothendieck_cocart, Correspondence, Cross};
use crate::error::{CorrespondenceError, LocalizationError};
use crate::functor::{FunctorData, FunctorSearch};
use crate::marking::Marking;
use crate::util::UnionFind;

#[derive(Clone, Debug)]
pub struct DeligneCorrespondence {
    pub correspondence: Correspondence,
    pub grothendieck: Correspondence,
    /// The canonical functor `E_f → E^Del`, identity on fibers.
    pub canonical: FunctorData,
}

struct DeligneCross<'a> {
    f: &'a FunctorData,
    w: &'a Marking,
    /// `(s, β)` with `s: x′ → x` marked and `β: f(x′) → y`.
    pairs: Vec<(Mor, Mor)>,
    index: HashMap<(Mor, Mor), usize>,
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

impl<'a> DeligneCross<'a> {
    fn new(f: &'a FunctorData, w: &'a Marking) -> Self {
        let (c, d) = (f.source(), f.target());
        let mut pairs = Vec::new();
        let mut index = HashMap::new();
        let resolutions: Vec<_> = c.objects().map(|x| resolution_category(w, x)).collect();
        for l in &resolutions {
            for &s in &l.arrows {
                for beta in d.morphisms().filter(|&b| d.src(b) == f.obj(c.src(s))) {
                    index.insert((s, beta), pairs.len());
                    pairs.push((s, beta));
                }
            }
        }
        let mut uf = UnionFind::new(pairs.len());
        for l in &resolutions {
            for (k, &u) in l.triangles.iter().enumerate() {
                let info = l.category.morphism(k);
                let (s1, s2) = (l.arrows[info.src], l.arrows[info.tgt]);
                for beta in d.morphisms().filter(|&b| d.src(b) == f.obj(c.src(s2))) {
                    uf.union(index[&(s2, beta)], index[&(s1, d.compose(beta, f.mor(u)))]);
                }
            }
        }
        let (class_of, count) = uf.classes();
        let mut reps = vec![usize::MAX; count];
        for (p, &k) in class_of.iter().enumerate() {
            if reps[k] == usize::MAX {
                reps[k] = p;
            }
        }
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by_key(|&k| {
            let (s, beta) = pairs[reps[k]];
            (c.tgt(s), d.tgt(beta), reps[k])
        });
        let mut renumber = vec![0; count];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        let class_of = class_of.iter().map(|&k| renumber[k]).collect();
        let reps = order.iter().map(|&k| reps[k]).collect();
        Self { f, w, pairs, index, class_of, reps }
    }

    fn class(&self, s: Mor, beta: Mor) -> usize {
        self.class_of[self.index[&(s, beta)]]
    }

    fn source(&self) -> &FinCat {
        self.f.source()
    }
}

impl Cross for DeligneCross<'_> {
    fn block(&self, _i: usize, _j: usize) -> Vec<(Obj, Obj, String)> {
        let (c, d) = (self.source(), self.f.target());
        self.reps
            .iter()
            .map(|&p| {
                let (s, beta) = self.pairs[p];
                let base = format!("{}@{}", d.morphism_name(beta), c.object_name(c.src(s)));
                let name = if c.is_identity(s) { base } else { format!("{base}/{}", c.morphism_name(s)) };
                (c.tgt(s), d.tgt(beta), name)
            })
            .collect()
    }

    fn post(&self, _i: usize, _j: usize, dm: Mor, e: usize) -> usize {
        let (s, beta) = self.pairs[self.reps[e]];
        self.class(s, self.f.target().compose(dm, beta))
    }

    fn pre(&self, _i: usize, _j: usize, e: usize, cm: Mor) -> usize {
        let c = self.source();
        let (s, beta) = self.pairs[self.reps[e]];
        // Ore square s ∘ c′ = c ∘ s′ with s′ marked
        let (s2, c2) = self
            .w
            .members()
            .filter(|&s2| c.tgt(s2) == c.src(cm))
            .find_map(|s2| {
                c.hom(c.src(s2), c.src(s))
                    .iter()
                    .copied()
                    .find(|&c2| c.compose(s, c2) == c.compose(cm, s2))
                    .map(|c2| (s2, c2))
            })
            .expect("Ore condition holds");
        self.class(s2, self.f.target().compose(beta, self.f.mor(c2)))
    }

    fn comp(&self, _i: usize, _j: usize, _k: usize, _e2: usize, _e1: usize) -> usize {
        unreachable!("two levels")
    }
}

pub fn deligne_correspondence(f: &FunctorData, w: &Marking) -> Result<DeligneCorrespondence, LocalizationError> {
    if !check_right_fractions(w).is_empty() {
        return Err(LocalizationError::NoFractions);
    }
    let (c, d) = (f.source(), f.target());
    let cross = DeligneCross::new(f, w);
    let correspondence = build_over_chain(&[c.clone(), d.clone()], &cross);
    let grothendieck = grothendieck_cocart(f);
    let t = grothendieck.total();
    let mut elements = Vec::new();
    for x in c.objects() {
        for m in d.morphisms().filter(|&m| d.src(m) == f.obj(x)) {
            elements.push(cross.class(c.identity(x), m));
        }
    }
    let new_cross = correspondence.cross_morphisms(0, 1);
    let mut mor_map: Vec<Mor> = t.morphisms().collect();
    for (m, k) in grothendieck.cross_morphisms(0, 1).into_iter().zip(elements) {
        mor_map[m] = new_cross[k];
    }
    let canonical = FunctorData::new(t.clone(), correspondence.total().clone(), t.objects().collect(), mor_map)?;
    Ok(DeligneCorrespondence { correspondence, grothendieck, canonical })
}

#[derive(Clone, Debug)]
pub struct DeligneComparison {
    pub deligne: DeligneCorrespondence,
    /// Localization of `E_f` at `W_C ∪ W_D`.
    pub localized_grothendieck: LocalizedCorrespondence,
    /// Localization of `E^Del` at `W_C ∪ W_D`.
    pub localized_deligne: LocalizedCorrespondence,
    /// `δ′` from the localized Deligne correspondence to `E′_f`.
    pub functor: FunctorData,
    pub fully_faithful: bool,
}

/// Builds `δ′` by sending a class `(s, β)` to `q(β) ∘ q(s)⁻¹` in `E′_f`
/// and factoring through the localization of `E^Del`.
pub fn deligne_comparison(
    f: &FunctorData,
    w_c: &Marking,
    w_d: &Marking,
    depth: usize,
) -> Result<DeligneComparison, LocalizationError> {
    let deligne = deligne_correspondence(f, w_c)?;
    let markings = [w_c.clone(), w_d.clone()];
    let ef = &deligne.grothendieck;
    let lf = localize_correspondence(ef, &marking_from_fibers(ef, &markings), depth)?;
    let del = &deligne.correspondence;
    let ld = localize_correspondence(del, &marking_from_fibers(del, &markings), depth)?;
    let (c, d) = (f.source(), f.target());
    let target = lf.correspondence.total().clone();
    let index_in_ef: HashMap<(Obj, Mor), Mor> = {
        let mut pairs = Vec::new();
        for x in c.objects() {
            for m in d.morphisms().filter(|&m| d.src(m) == f.obj(x)) {
                pairs.push((x, m));
            }
        }
        pairs.into_iter().zip(ef.cross_morphisms(0, 1)).collect()
    };
    let cross = DeligneCross::new(f, w_c);
    let del_cross = del.cross_morphisms(0, 1);
    let dt = del.total();
    let phi_map: Vec<Mor> = dt
        .morphisms()
        .map(|m| match del_cross.iter().position(|&k| k == m) {
            None => lf.q.mor(m),
            Some(e) => {
                let (s, beta) = cross.pairs[cross.reps[e]];
                let h = lf.q.mor(index_in_ef[&(c.src(s), beta)]);
                let s_inv = target.inverse(lf.q.mor(ef.global_morphism(0, s))).expect("marked arrows are inverted");
                target.compose(h, s_inv)
            }
        })
        .collect();
    let phi = FunctorData::new(dt.clone(), target.clone(), dt.objects().collect(), phi_map)?;
    let source = ld.correspondence.total();
    let mut search = FunctorSearch::new(source, &target);
    for x in dt.objects() {
        search = search.fix_object(x, x);
    }
    let mut fixed = vec![None; source.num_morphisms()];
    for m in dt.morphisms() {
        let k = ld.q.mor(m);
        if fixed[k].is_some_and(|image| image != phi.mor(m)) {
            return Err(CorrespondenceError::Internal("δ′ is not well defined".into()).into());
        }
        fixed[k] = Some(phi.mor(m));
        search = search.fix_morphism(k, phi.mor(m));
    }
    let functor = search
        .first(source, &target)
        .ok_or_else(|| CorrespondenceError::Internal("δ′ does not factor through the localization".into()))?;
    let fully_faithful = functor.is_fully_faithful();
    Ok(DeligneComparison { deligne, localized_grothendieck: lf, localized_deligne: ld, functor, fully_faithful })
}
