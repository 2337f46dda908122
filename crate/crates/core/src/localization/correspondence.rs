//! Localizing a correspondence at a marking supported in its fibers.

use std::collections::HashMap;

use super::{localize, LocalizationResult, Method};
use crate::category::{FinCat, Mor, Obj};
use crate::correspondence::{build_over_chain, check_flat_over_triangle, glue, Correspondence, Cross};
use crate::error::LocalizationError;
use crate::functor::FunctorData;
use crate::marking::{saturate_marking, Marking};
use crate::util::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Fibers localized separately, cross homs by the coend formula.
    Coend,
    /// Over `[2]`: the two localized halves glued along the middle fiber.
    Glued,
    /// The total category localized directly.
    Total(Method),
}

#[derive(Clone, Debug)]
pub struct LocalizedCorrespondence {
    pub correspondence: Correspondence,
    /// `E → E′`, identity on objects.
    pub q: FunctorData,
    pub route: Route,
    /// Localization of each fiber (empty for the total route).
    pub fibers: Vec<LocalizationResult>,
}

/// The total marking generated by markings of the fibers.
pub fn marking_from_fibers(x: &Correspondence, fibers: &[Marking]) -> Marking {
    let gens: Vec<Mor> = (0..=x.base_length())
        .flat_map(|i| fibers[i].members().map(move |m| x.global_morphism(i, m)))
        .collect();
    saturate_marking(x.total().clone(), gens)
}

/// The marking of fiber `i` induced by a total marking.
pub fn fiber_marking(x: &Correspondence, w: &Marking, i: usize) -> Marking {
    let f = x.fiber(i);
    let gens: Vec<Mor> = (0..f.morphisms.len()).filter(|&k| w.contains(f.morphisms[k])).collect();
    saturate_marking(f.cat.clone(), gens)
}

pub fn localize_correspondence(
    x: &Correspondence,
    w: &Marking,
    depth: usize,
) -> Result<LocalizedCorrespondence, LocalizationError> {
    let t = x.total();
    if let Some(m) = w.non_isos().find(|&m| {
        let (i, j) = x.morphism_degrees(m);
        i != j
    }) {
        return Err(LocalizationError::NotFiberSupported(t.morphism_name(m).to_string()));
    }
    match x.base_length() {
        0 => {
            let r = localize(&fiber_marking(x, w, 0), depth)?;
            let total = r.localized().clone();
            let correspondence = Correspondence::new(total.clone(), 0, vec![0; total.num_objects()])?;
            let q = r.q().rebase(t.clone(), total);
            Ok(LocalizedCorrespondence { correspondence, q, route: Route::Coend, fibers: vec![r] })
        }
        1 => {
            let fibers = vec![localize(&fiber_marking(x, w, 0), depth)?, localize(&fiber_marking(x, w, 1), depth)?];
            Ok(coend(x, fibers))
        }
        2 if check_flat_over_triangle(x)? => glued(x, w, depth),
        n => {
            let r = localize(w, depth)?;
            let correspondence = Correspondence::new(r.localized().clone(), n, x.degrees().to_vec())?;
            let q = r.q().rebase(t.clone(), correspondence.total().clone());
            Ok(LocalizedCorrespondence { correspondence, q, route: Route::Total(r.method()), fibers: Vec::new() })
        }
    }
}

/// Cross homs `∫^{a,b} C′(x, a) × H(a, b) × D′(b, y)`.
struct CoendCross<'a> {
    x: &'a Correspondence,
    c: &'a FinCat,
    d: &'a FinCat,
    triples: Vec<(Mor, Mor, Mor)>,
    index: HashMap<(Mor, Mor, Mor), usize>,
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

impl<'a> CoendCross<'a> {
    fn new(x: &'a Correspondence, lc: &'a LocalizationResult, ld: &'a LocalizationResult) -> Self {
        let t = x.total();
        let (c, d) = (lc.localized().as_ref(), ld.localized().as_ref());
        let cross = x.cross_morphisms(0, 1);
        let mut triples = Vec::new();
        let mut index = HashMap::new();
        for &h in &cross {
            let (a, b) = (x.local(t.src(h)), x.local(t.tgt(h)));
            for alpha in c.morphisms().filter(|&m| c.tgt(m) == a) {
                for beta in d.morphisms().filter(|&m| d.src(m) == b) {
                    index.insert((alpha, h, beta), triples.len());
                    triples.push((alpha, h, beta));
                }
            }
        }
        let mut uf = UnionFind::new(triples.len());
        let (f0, f1) = (x.fiber(0), x.fiber(1));
        for (p, &(alpha, h, beta)) in triples.iter().enumerate() {
            // (q(c) ∘ α, h, β) ~ (α, h ∘ c, β) for c: a → a′ with h: a′ → b
            for (k, &cm) in f0.morphisms.iter().enumerate() {
                if t.tgt(cm) == t.src(h) {
                    let a = x.local(t.src(cm));
                    for alpha0 in c.morphisms().filter(|&m| c.tgt(m) == a && c.src(m) == c.src(alpha)) {
                        if c.compose(lc.q().mor(k), alpha0) == alpha {
                            uf.union(p, index[&(alpha0, t.compose(h, cm), beta)]);
                        }
                    }
                }
            }
            // (α, d ∘ h, β) ~ (α, h, β ∘ q(d)) for d: b → b′
            for (k, &dm) in f1.morphisms.iter().enumerate() {
                if t.src(dm) == t.tgt(h) {
                    let b2 = x.local(t.tgt(dm));
                    for beta2 in d.morphisms().filter(|&m| d.src(m) == b2 && d.tgt(m) == d.tgt(beta)) {
                        if d.compose(beta2, ld.q().mor(k)) == beta {
                            uf.union(p, index[&(alpha, t.compose(dm, h), beta2)]);
                        }
                    }
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
        let ends = |p: usize| {
            let (alpha, _, beta) = triples[p];
            (c.src(alpha), d.tgt(beta), p)
        };
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by_key(|&k| ends(reps[k]));
        let mut renumber = vec![0; count];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        let class_of = class_of.iter().map(|&k| renumber[k]).collect();
        let reps = order.iter().map(|&k| reps[k]).collect();
        Self { x, c, d, triples, index, class_of, reps }
    }

    fn class(&self, alpha: Mor, h: Mor, beta: Mor) -> usize {
        self.class_of[self.index[&(alpha, h, beta)]]
    }
}

impl Cross for CoendCross<'_> {
    fn block(&self, _i: usize, _j: usize) -> Vec<(Obj, Obj, String)> {
        let t = self.x.total();
        self.reps
            .iter()
            .map(|&p| {
                let (alpha, h, beta) = self.triples[p];
                let mut parts = Vec::new();
                if !self.d.is_identity(beta) {
                    parts.push(self.d.morphism_name(beta));
                }
                parts.push(t.morphism_name(h));
                if !self.c.is_identity(alpha) {
                    parts.push(self.c.morphism_name(alpha));
                }
                (self.c.src(alpha), self.d.tgt(beta), parts.join("."))
            })
            .collect()
    }

    fn post(&self, _i: usize, _j: usize, dm: Mor, e: usize) -> usize {
        let (alpha, h, beta) = self.triples[self.reps[e]];
        self.class(alpha, h, self.d.compose(dm, beta))
    }

    fn pre(&self, _i: usize, _j: usize, e: usize, cm: Mor) -> usize {
        let (alpha, h, beta) = self.triples[self.reps[e]];
        self.class(self.c.compose(alpha, cm), h, beta)
    }

    fn comp(&self, _i: usize, _j: usize, _k: usize, _e2: usize, _e1: usize) -> usize {
        unreachable!("two levels")
    }
}

fn coend(x: &Correspondence, fibers: Vec<LocalizationResult>) -> LocalizedCorrespondence {
    let t = x.total();
    let (lc, ld) = (&fibers[0], &fibers[1]);
    let cross = CoendCross::new(x, lc, ld);
    let localized = build_over_chain(&[lc.localized().clone(), ld.localized().clone()], &cross);
    let new_cross = localized.cross_morphisms(0, 1);
    let mor_map = t
        .morphisms()
        .map(|m| match x.local_morphism(m) {
            Some(k) => {
                let i = x.degree(t.src(m));
                localized.global_morphism(i, fibers[i].q().mor(k))
            }
            None => {
                let (a, b) = (x.local(t.src(m)), x.local(t.tgt(m)));
                new_cross[cross.class(lc.localized().identity(a), m, ld.localized().identity(b))]
            }
        })
        .collect();
    let obj_map = t.objects().map(|o| localized.global(x.degree(o), x.local(o))).collect();
    let q = FunctorData::new(t.clone(), localized.total().clone(), obj_map, mor_map)
        .expect("coend localization is functorial");
    LocalizedCorrespondence { correspondence: localized, q, route: Route::Coend, fibers }
}

/// Morphisms of `x` kept by the restriction to `levels`, in order.
fn kept_morphisms(x: &Correspondence, levels: &[usize]) -> Vec<Mor> {
    x.total()
        .morphisms()
        .filter(|&m| {
            let (i, j) = x.morphism_degrees(m);
            levels.contains(&i) && levels.contains(&j)
        })
        .collect()
}

fn glued(x: &Correspondence, w: &Marking, depth: usize) -> Result<LocalizedCorrespondence, LocalizationError> {
    let t = x.total();
    let fibers: Vec<LocalizationResult> =
        (0..3).map(|i| localize(&fiber_marking(x, w, i), depth)).collect::<Result<_, _>>()?;
    let halves = [[0usize, 1], [1, 2]].map(|levels| {
        let r = x.restrict(&levels).expect("valid levels");
        let local: Vec<LocalizationResult> = levels.iter().map(|&l| fibers[l].clone()).collect();
        let localized = coend(&r, local);
        (kept_morphisms(x, &levels), localized)
    });
    let g = glue(&halves[0].1.correspondence, &halves[1].1.correspondence)?;
    let gt = g.total().clone();
    let blocks = [g.cross_morphisms(0, 1), g.cross_morphisms(1, 2)];
    let mut mor_map = vec![usize::MAX; t.num_morphisms()];
    for m in t.morphisms() {
        let (i, j) = x.morphism_degrees(m);
        mor_map[m] = if i == j {
            g.global_morphism(i, fibers[i].q().mor(x.local_morphism(m).expect("fiber morphism")))
        } else if j == i + 1 {
            let (kept, half) = &halves[i];
            let local = kept.iter().position(|&k| k == m).expect("kept morphism");
            let image = half.q.mor(local);
            let e = half.correspondence.cross_morphisms(0, 1).iter().position(|&k| k == image).expect("cross image");
            blocks[i][e]
        } else {
            continue;
        };
    }
    for m in t.morphisms() {
        if x.morphism_degrees(m) == (0, 2) {
            let (e1, e2) = x
                .objects_at(1)
                .iter()
                .flat_map(|&b| t.hom(t.src(m), b).iter().flat_map(move |&e1| t.hom(b, t.tgt(m)).iter().map(move |&e2| (e1, e2))))
                .find(|&(e1, e2)| t.compose(e2, e1) == m)
                .expect("flat correspondence");
            mor_map[m] = gt.compose(mor_map[e2], mor_map[e1]);
        }
    }
    let obj_map = t.objects().map(|o| g.global(x.degree(o), x.local(o))).collect();
    let q = FunctorData::new(t.clone(), gt, obj_map, mor_map)?;
    Ok(LocalizedCorrespondence { correspondence: g, q, route: Route::Glued, fibers })
}
