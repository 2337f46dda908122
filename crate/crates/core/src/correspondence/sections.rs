//! The category of sections of a correspondence over `[1]` and its
//! description as a fiber product.

use std::collections::HashMap;
use std::sync::Arc;

use super::{check_cocartesian, CocartWitness, Correspondence};
use crate::category::{FinCat, Mor, MorphismInfo, Obj};
use crate::error::CorrespondenceError;
use crate::functor::FunctorData;

/// Objects are arrows `ends[k] = (x, y)` labelled by `names[k]`; morphisms
/// are pairs `(a, b)` with `commutes(k, k2, a, b)`.
fn square_category(
    ends: &[(Obj, Obj)],
    names: Vec<String>,
    c0: &FinCat,
    c1: &FinCat,
    commutes: impl Fn(usize, usize, Mor, Mor) -> bool,
) -> (FinCat, Vec<(usize, usize, Mor, Mor)>) {
    let mut morphisms = Vec::new();
    let mut index = HashMap::new();
    let mut parts = Vec::new();
    for (k, &(x, y)) in ends.iter().enumerate() {
        for (k2, &(x2, y2)) in ends.iter().enumerate() {
            for &a in c0.hom(x, x2) {
                for &b in c1.hom(y, y2) {
                    if commutes(k, k2, a, b) {
                        index.insert((k, k2, a, b), morphisms.len());
                        parts.push((k, k2, a, b));
                        morphisms.push(MorphismInfo {
                            name: format!("({},{})", c0.morphism_name(a), c1.morphism_name(b)),
                            src: k,
                            tgt: k2,
                        });
                    }
                }
            }
        }
    }
    let ids = ends
        .iter()
        .enumerate()
        .map(|(k, &(x, y))| index[&(k, k, c0.identity(x), c1.identity(y))])
        .collect();
    let cat = FinCat::from_fn(names, morphisms, ids, |g, f| {
        let (k, _, a, b) = parts[f];
        let (_, k3, a2, b2) = parts[g];
        index[&(k, k3, c0.compose(a2, a), c1.compose(b2, b))]
    });
    (cat, parts)
}

/// `Fun_{[1]}([1], X)`: objects are the arrows from degree 0 to degree 1,
/// morphisms the commuting squares. Checked against
/// [`fiber_product_of_sections`] before returning.
pub fn sections_category(x: &Correspondence) -> Result<FinCat, CorrespondenceError> {
    x.require_base(1)?;
    let w = check_cocartesian(x)?;
    let t = x.total();
    let arrows = x.cross_morphisms(0, 1);
    let (f0, f1) = (x.fiber(0), x.fiber(1));
    let ends: Vec<(Obj, Obj)> = arrows.iter().map(|&m| (x.local(t.src(m)), x.local(t.tgt(m)))).collect();
    let names = arrows.iter().map(|&m| t.morphism_name(m).to_string()).collect();
    let (sections, parts) = square_category(&ends, names, &f0.cat, &f1.cat, |k, k2, a, b| {
        t.compose(f1.morphisms[b], arrows[k]) == t.compose(arrows[k2], f0.morphisms[a])
    });
    let (product, product_parts) = product_squares(x, &w);
    let (sections, product) = (Arc::new(sections), Arc::new(product));
    let comparison = section_comparison(x, &w, &arrows, (&sections, &parts), (&product, &product_parts))?;
    if !comparison.is_bijective() {
        return Err(CorrespondenceError::Internal("sections differ from the fiber product".into()));
    }
    Ok(Arc::try_unwrap(sections).unwrap_or_else(|s| (*s).clone()))
}

/// `E_0 ×_{E_1} E_1^{[1]}` for the classifying functor `F` of `w`: objects
/// `(x, γ: F(x) → y)`, morphisms `(a, b)` with `b ∘ γ = γ' ∘ F(a)`.
pub fn fiber_product_of_sections(x: &Correspondence, w: &CocartWitness) -> FinCat {
    product_squares(x, w).0
}

fn product_squares(x: &Correspondence, w: &CocartWitness) -> (FinCat, Vec<(usize, usize, Mor, Mor)>) {
    let f = &w.classifying[0];
    let (c0, c1) = (x.fiber_cat(0), x.fiber_cat(1));
    let mut objects = Vec::new();
    for a in c0.objects() {
        for g in c1.morphisms().filter(|&g| c1.src(g) == f.obj(a)) {
            objects.push((a, g));
        }
    }
    let ends: Vec<(Obj, Obj)> = objects.iter().map(|&(a, g)| (a, c1.tgt(g))).collect();
    let names = objects
        .iter()
        .map(|&(a, g)| format!("({},{})", c0.object_name(a), c1.morphism_name(g)))
        .collect();
    square_category(&ends, names, c0, c1, |k, k2, a, b| {
        c1.compose(b, objects[k].1) == c1.compose(objects[k2].1, f.mor(a))
    })
}

fn section_comparison(
    x: &Correspondence,
    w: &CocartWitness,
    arrows: &[Mor],
    (sections, parts): (&Arc<FinCat>, &[(usize, usize, Mor, Mor)]),
    (product, product_parts): (&Arc<FinCat>, &[(usize, usize, Mor, Mor)]),
) -> Result<FunctorData, CorrespondenceError> {
    let t = x.total();
    let (c0, c1) = (x.fiber_cat(0), x.fiber_cat(1));
    let f = &w.classifying[0];
    let mut product_objects = HashMap::new();
    let mut k = 0;
    for a in c0.objects() {
        for g in c1.morphisms().filter(|&g| c1.src(g) == f.obj(a)) {
            product_objects.insert((a, g), k);
            k += 1;
        }
    }
    let obj_map: Vec<Obj> = arrows
        .iter()
        .map(|&m| {
            let a = x.local(t.src(m));
            let lift = w.lifts[0][a];
            let g = t
                .hom(t.tgt(lift), t.tgt(m))
                .iter()
                .copied()
                .find(|&g| t.compose(g, lift) == m)
                .expect("cocartesian factorisation");
            product_objects[&(a, x.local_morphism(g).expect("fiber morphism"))]
        })
        .collect();
    let lookup: HashMap<(usize, usize, Mor, Mor), Mor> =
        product_parts.iter().enumerate().map(|(p, &key)| (key, p)).collect();
    let mor_map = parts
        .iter()
        .map(|&(k, k2, a, b)| lookup.get(&(obj_map[k], obj_map[k2], a, b)).copied().unwrap_or(usize::MAX))
        .collect::<Vec<_>>();
    if mor_map.contains(&usize::MAX) {
        return Err(CorrespondenceError::Internal("a section square has no fiber-product image".into()));
    }
    Ok(FunctorData::new(sections.clone(), product.clone(), obj_map, mor_map)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::category::product_with_chain;
    use crate::correspondence::grothendieck_cocart;

    #[test]
    fn sections_of_terminal_product() {
        let total = Arc::new(product_with_chain(&catalog::terminal(), 1));
        let x = Correspondence::new(total, 1, vec![0, 1]).unwrap();
        let s = sections_category(&x).unwrap();
        assert_eq!((s.num_objects(), s.num_morphisms()), (1, 1));
    }

    #[test]
    fn sections_of_identity_on_arrow() {
        let e = grothendieck_cocart(&FunctorData::identity(Arc::new(catalog::arrow())));
        let s = sections_category(&e).unwrap();
        let mut names: Vec<&str> = s.object_names().iter().map(String::as_str).collect();
        names.sort_unstable();
        assert_eq!(names, vec!["id_0@0", "id_1@1", "u@0"]);
        // squares: three identities, id_0@0 → u@0, u@0 → id_1@1, and their composite
        assert_eq!(s.num_morphisms(), 6);
    }

    #[test]
    fn sections_into_discrete_pair() {
        let f = FunctorData::constant(Arc::new(catalog::terminal()), Arc::new(catalog::discrete(2)), 0);
        let s = sections_category(&grothendieck_cocart(&f)).unwrap();
        assert_eq!((s.num_objects(), s.num_morphisms()), (1, 1));
    }
}
