//! The calculus of right (and, dually, left) fractions.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Certificate, Fraction, LocalizationResult, Method};
use crate::category::{FinCat, Mor, MorphismInfo, Obj};
use crate::error::LocalizationError;
use crate::functor::FunctorData;
use crate::marking::Marking;
use crate::util::UnionFind;

/// Failures of the right Ore and cancellation conditions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FractionsReport {
    /// `(s, a)` with `s ∈ W`, `a` into `tgt(s)`, and no square
    /// `s ∘ a′ = a ∘ s′` with `s′ ∈ W`.
    pub ore_failures: Vec<(Mor, Mor)>,
    /// `(s, f, g)` with `s ∘ f = s ∘ g`, `s ∈ W`, and no `t ∈ W` with
    /// `f ∘ t = g ∘ t`.
    pub cancellation_failures: Vec<(Mor, Mor, Mor)>,
}

impl FractionsReport {
    pub fn is_empty(&self) -> bool {
        self.ore_failures.is_empty() && self.cancellation_failures.is_empty()
    }
}

fn into(w: &Marking, x: Obj) -> impl Iterator<Item = Mor> + '_ {
    let c = w.host();
    let mut v: Vec<Mor> = w.members().filter(|&s| c.tgt(s) == x).collect();
    v.sort_by_key(|&s| (c.src(s), s));
    v.into_iter()
}

/// Ore squares for `(t, f)`: pairs `(t′, f′)` with `t′ ∈ W` and
/// `t ∘ f′ = f ∘ t′`, least apex first.
fn ore_squares(w: &Marking, t: Mor, f: Mor) -> impl Iterator<Item = (Mor, Mor)> + '_ {
    let c = w.host();
    into(w, c.src(f)).flat_map(move |t2| {
        c.hom(c.src(t2), c.src(t))
            .iter()
            .copied()
            .filter(move |&f2| c.compose(t, f2) == c.compose(f, t2))
            .map(move |f2| (t2, f2))
    })
}

pub fn check_right_fractions(w: &Marking) -> FractionsReport {
    let c = w.host();
    let mut report = FractionsReport::default();
    for s in w.members() {
        for a in c.morphisms().filter(|&a| c.tgt(a) == c.tgt(s)) {
            if ore_squares(w, s, a).next().is_none() {
                report.ore_failures.push((s, a));
            }
        }
        let x = c.src(s);
        for z in c.objects() {
            let hom = c.hom(z, x);
            for (i, &f) in hom.iter().enumerate() {
                for &g in &hom[i + 1..] {
                    if c.compose(s, f) == c.compose(s, g)
                        && !into(w, z).any(|t| c.compose(f, t) == c.compose(g, t))
                    {
                        report.cancellation_failures.push((s, f, g));
                    }
                }
            }
        }
    }
    report
}

/// The right conditions for the opposite category; morphism ids are
/// shared with the original.
pub fn check_left_fractions(w: &Marking) -> FractionsReport {
    let op = Arc::new(w.host().opposite());
    check_right_fractions(&w.opposite(op))
}

/// `L_x`: marked arrows into `x` and commuting triangles between them.
#[derive(Clone, Debug)]
pub struct ResolutionCategory {
    pub target: Obj,
    /// The marked arrow behind each object.
    pub arrows: Vec<Mor>,
    /// Morphism `k` of `category` is the triangle given by `triangles[k]`.
    pub triangles: Vec<Mor>,
    pub category: FinCat,
}

pub fn resolution_category(w: &Marking, x: Obj) -> ResolutionCategory {
    let c = w.host();
    let arrows: Vec<Mor> = into(w, x).collect();
    let mut morphisms = Vec::new();
    let mut triangles = Vec::new();
    let mut index = HashMap::new();
    for (i, &s1) in arrows.iter().enumerate() {
        for (j, &s2) in arrows.iter().enumerate() {
            for &u in c.hom(c.src(s1), c.src(s2)) {
                if c.compose(s2, u) == s1 {
                    index.insert((i, j, u), morphisms.len());
                    triangles.push(u);
                    morphisms.push(MorphismInfo { name: c.morphism_name(u).to_string(), src: i, tgt: j });
                }
            }
        }
    }
    let names = arrows.iter().map(|&s| c.morphism_name(s).to_string()).collect();
    let ids = arrows.iter().enumerate().map(|(i, &s)| index[&(i, i, c.identity(c.src(s)))]).collect();
    let category = FinCat::from_fn(names, morphisms.clone(), ids, |g, f| {
        let (i, k) = (morphisms[f].src, morphisms[g].tgt);
        index[&(i, k, c.compose(triangles[g], triangles[f]))]
    });
    ResolutionCategory { target: x, arrows, triangles, category }
}

/// Hom-sets of `C[W⁻¹]` as colimits over the resolution categories.
struct Fractions {
    /// `(s, f)` spans, grouped by the target of `s`.
    spans: Vec<(Mor, Mor)>,
    span_index: HashMap<(Mor, Mor), usize>,
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

impl Fractions {
    fn new(w: &Marking) -> Self {
        let c = w.host();
        let mut spans = Vec::new();
        let mut span_index = HashMap::new();
        for x in c.objects() {
            for s in into(w, x) {
                for f in c.morphisms().filter(|&f| c.src(f) == c.src(s)) {
                    span_index.insert((s, f), spans.len());
                    spans.push((s, f));
                }
            }
        }
        let mut uf = UnionFind::new(spans.len());
        for x in c.objects() {
            let l = resolution_category(w, x);
            for (k, &u) in l.triangles.iter().enumerate() {
                let info = l.category.morphism(k);
                let (s1, s2) = (l.arrows[info.src], l.arrows[info.tgt]);
                for f in c.morphisms().filter(|&f| c.src(f) == c.src(s2)) {
                    uf.union(span_index[&(s2, f)], span_index[&(s1, c.compose(f, u))]);
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
        // order classes by (source, target, representative)
        let mut order: Vec<usize> = (0..count).collect();
        let key = |k: usize| {
            let (s, f) = spans[reps[k]];
            (c.tgt(s), c.tgt(f), reps[k])
        };
        order.sort_by_key(|&k| key(k));
        let mut renumber = vec![0; count];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        let class_of = class_of.iter().map(|&k| renumber[k]).collect();
        let reps = order.iter().map(|&k| reps[k]).collect();
        Self { spans, span_index, class_of, reps }
    }

    fn class(&self, s: Mor, f: Mor) -> usize {
        self.class_of[self.span_index[&(s, f)]]
    }

    /// `(t, g) ∘ (s, f)` through the given Ore square for `(t, f)`.
    fn compose_via(&self, c: &FinCat, (s, _): (Mor, Mor), (_, g): (Mor, Mor), (t2, f2): (Mor, Mor)) -> usize {
        self.class(c.compose(s, t2), c.compose(g, f2))
    }
}

pub fn localize_fractions(w: &Marking) -> Result<LocalizationResult, LocalizationError> {
    if !check_right_fractions(w).is_empty() {
        return Err(LocalizationError::NoFractions);
    }
    let c = w.host();
    let fr = Fractions::new(w);
    let morphisms: Vec<MorphismInfo> = fr
        .reps
        .iter()
        .map(|&p| {
            let (s, f) = fr.spans[p];
            let name = if c.is_identity(s) {
                c.morphism_name(f).to_string()
            } else {
                format!("{}/{}", c.morphism_name(f), c.morphism_name(s))
            };
            MorphismInfo { name, src: c.tgt(s), tgt: c.tgt(f) }
        })
        .collect();
    let ids = c.objects().map(|x| fr.class(c.identity(x), c.identity(x))).collect();
    let localized = FinCat::try_from_fn(c.object_names().to_vec(), morphisms, ids, |g, f| {
        let (sf, ff) = fr.spans[fr.reps[f]];
        let (tg, gg) = fr.spans[fr.reps[g]];
        let square = ore_squares(w, tg, ff).next().expect("Ore condition holds");
        fr.compose_via(c, (sf, ff), (tg, gg), square)
    })?;
    let localized = Arc::new(localized);
    let mor_map = c.morphisms().map(|m| fr.class(c.identity(c.src(m)), m)).collect();
    let q = FunctorData::new(c.clone(), localized.clone(), c.objects().collect(), mor_map)?;
    let certificates = fr
        .reps
        .iter()
        .map(|&p| {
            let (s, f) = fr.spans[p];
            Certificate::Right(Fraction { apex: c.src(s), backward: s, forward: f })
        })
        .collect();
    Ok(LocalizationResult::new(w.clone(), localized, q, Method::RightFractions, certificates))
}

/// Left fractions `s⁻¹ ∘ f`, computed as right fractions of the opposite.
pub fn localize_left_fractions(w: &Marking) -> Result<LocalizationResult, LocalizationError> {
    let c = w.host();
    let op = Arc::new(c.opposite());
    let r = localize_fractions(&w.opposite(op))?;
    let localized = Arc::new(r.localized().opposite());
    let q = r.q().dual_with(c.clone(), localized.clone());
    let certificates = r
        .certificates
        .iter()
        .map(|cert| match cert {
            Certificate::Right(f) => Certificate::Left(*f),
            other => other.clone(),
        })
        .collect();
    Ok(LocalizationResult::new(w.clone(), localized, q, Method::LeftFractions, certificates))
}

/// Recomputes every composite from every pair of representatives and
/// every admissible Ore square, and checks the classes agree.
pub fn fraction_composition_is_independent(w: &Marking) -> bool {
    if !check_right_fractions(w).is_empty() {
        return false;
    }
    let c = w.host();
    let fr = Fractions::new(w);
    let count = fr.reps.len();
    let mut members = vec![Vec::new(); count];
    for (p, &k) in fr.class_of.iter().enumerate() {
        members[k].push(fr.spans[p]);
    }
    for k1 in 0..count {
        let f1 = fr.spans[fr.reps[k1]].1;
        for k2 in (0..count).filter(|&k2| c.tgt(fr.spans[fr.reps[k2]].0) == c.tgt(f1)) {
            let mut seen = None;
            for &a in &members[k1] {
                for &b in &members[k2] {
                    for square in ore_squares(w, b.0, a.1) {
                        let r = fr.compose_via(c, a, b, square);
                        if *seen.get_or_insert(r) != r {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::marking::saturate_marking;

    fn arrow_marked() -> Marking {
        let a = Arc::new(catalog::arrow());
        saturate_marking(a, [1])
    }

    #[test]
    fn poset_marking_has_fractions() {
        assert!(check_right_fractions(&arrow_marked()).is_empty());
    }

    #[test]
    fn isos_only_have_fractions() {
        for c in catalog::small_pool(8) {
            assert!(check_right_fractions(&Marking::isos(Arc::new(c))).is_empty());
        }
    }

    #[test]
    fn cospan_with_one_leg_fails_ore() {
        let c = Arc::new(catalog::cospan());
        let a_to_c = c.find_morphism("a<c").unwrap();
        let report = check_right_fractions(&saturate_marking(c.clone(), [a_to_c]));
        assert!(!report.ore_failures.is_empty());
    }

    #[test]
    fn resolution_of_arrow_target() {
        let l = resolution_category(&arrow_marked(), 1);
        assert_eq!(l.category.num_objects(), 2);
        assert_eq!(l.category.num_morphisms(), 3);
        let names: Vec<&str> = l.category.object_names().iter().map(String::as_str).collect();
        assert_eq!(names, vec!["u", "id_1"]);
    }

    #[test]
    fn trivial_resolution() {
        let l = resolution_category(&Marking::isos(Arc::new(catalog::arrow())), 0);
        assert_eq!((l.category.num_objects(), l.category.num_morphisms()), (1, 1));
    }

    #[test]
    fn arrow_localizes_to_indiscrete_pair() {
        let r = localize_fractions(&arrow_marked()).unwrap();
        let l = r.localized();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(l.hom(x, y).len(), 1);
            }
        }
        assert!(r.inverts_marking());
        assert!(fraction_composition_is_independent(&arrow_marked()));
    }

    #[test]
    fn left_fractions_agree_on_arrow() {
        let r = localize_left_fractions(&arrow_marked()).unwrap();
        assert_eq!(r.localized().num_morphisms(), 4);
        assert!(r.inverts_marking());
    }

    #[test]
    fn trivial_marking_changes_nothing() {
        let c = Arc::new(catalog::idempotent());
        let r = localize_fractions(&Marking::isos(c.clone())).unwrap();
        assert!(r.localized().same_table(&c));
    }
}
