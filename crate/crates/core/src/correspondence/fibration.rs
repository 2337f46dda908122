//! Cocartesian and cartesian arrows of correspondences, witnesses and the
//! classifying functors they induce.

use super::Correspondence;
use crate::category::{Mor, Obj};
use crate::error::CorrespondenceError;
use crate::functor::FunctorData;

/// Chosen lifts and the induced classifying functors, one per base arrow
/// `i → i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocartWitness {
    /// `lifts[i][x]`: cocartesian morphism out of the `x`-th object of
    /// level `i`.
    pub lifts: Vec<Vec<Mor>>,
    /// Fiber `i` → fiber `i+1`.
    pub classifying: Vec<FunctorData>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartWitness {
    /// `lifts[i][y]`: cartesian morphism into the `y`-th object of level
    /// `i+1`.
    pub lifts: Vec<Vec<Mor>>,
    /// Fiber `i+1` → fiber `i`.
    pub classifying: Vec<FunctorData>,
}

fn consecutive(x: &Correspondence, m: Mor) -> Result<(), CorrespondenceError> {
    let (i, j) = x.morphism_degrees(m);
    if j != i + 1 {
        return Err(CorrespondenceError::BadDegrees(x.total().morphism_name(m).to_string()));
    }
    Ok(())
}

/// Precomposition with `m: a → b` is a bijection `Hom(b, z) → Hom(a, z)`
/// for every `z` at or above the level of `b`.
pub(crate) fn couniversal(x: &Correspondence, m: Mor) -> bool {
    let t = x.total();
    let (a, b) = (t.src(m), t.tgt(m));
    let level = x.degree(b);
    let mut seen = vec![false; t.num_morphisms()];
    t.objects().filter(|&z| x.degree(z) >= level).all(|z| {
        let (from_b, from_a) = (t.hom(b, z), t.hom(a, z));
        if from_b.len() != from_a.len() {
            return false;
        }
        from_b.iter().all(|&g| !std::mem::replace(&mut seen[t.compose(g, m)], true))
    })
}

/// Postcomposition with `m: a → b` is a bijection `Hom(z, a) → Hom(z, b)`
/// for every `z` at or below the level of `a`.
pub(crate) fn universal(x: &Correspondence, m: Mor) -> bool {
    let t = x.total();
    let (a, b) = (t.src(m), t.tgt(m));
    let level = x.degree(a);
    let mut seen = vec![false; t.num_morphisms()];
    t.objects().filter(|&z| x.degree(z) <= level).all(|z| {
        let (into_a, into_b) = (t.hom(z, a), t.hom(z, b));
        if into_a.len() != into_b.len() {
            return false;
        }
        into_a.iter().all(|&g| !std::mem::replace(&mut seen[t.compose(m, g)], true))
    })
}

/// Whether `m`, between consecutive levels, is cocartesian.
pub fn is_cocartesian_arrow(x: &Correspondence, m: Mor) -> Result<bool, CorrespondenceError> {
    consecutive(x, m)?;
    Ok(couniversal(x, m))
}

/// Whether `m`, between consecutive levels, is cartesian.
pub fn is_cartesian_arrow(x: &Correspondence, m: Mor) -> Result<bool, CorrespondenceError> {
    consecutive(x, m)?;
    Ok(universal(x, m))
}

/// All cocartesian arrows out of `a` to the next level, in index order.
pub fn cocartesian_lifts(x: &Correspondence, a: Obj) -> Vec<Mor> {
    let t = x.total();
    let next = x.degree(a) + 1;
    if next > x.base_length() {
        return Vec::new();
    }
    let mut out: Vec<Mor> = x.objects_at(next).iter().flat_map(|&b| t.hom(a, b).iter().copied()).filter(|&m| couniversal(x, m)).collect();
    out.sort_unstable();
    out
}

/// All cartesian arrows into `b` from the previous level, in index order.
pub fn cartesian_lifts(x: &Correspondence, b: Obj) -> Vec<Mor> {
    let t = x.total();
    let Some(prev) = x.degree(b).checked_sub(1) else {
        return Vec::new();
    };
    let mut out: Vec<Mor> = x.objects_at(prev).iter().flat_map(|&a| t.hom(a, b).iter().copied()).filter(|&m| universal(x, m)).collect();
    out.sort_unstable();
    out
}

/// The functor fiber `i` → fiber `i+1` induced by the given cocartesian
/// lifts (one per object of level `i`).
pub fn classify_with(x: &Correspondence, i: usize, lifts: &[Mor]) -> FunctorData {
    let t = x.total();
    let (src, dst) = (x.fiber(i), x.fiber(i + 1));
    let obj_map: Vec<Obj> = lifts.iter().map(|&l| x.local(t.tgt(l))).collect();
    let mor_map = src
        .cat
        .morphisms()
        .map(|c| {
            let (a, b) = (src.cat.src(c), src.cat.tgt(c));
            let wanted = t.compose(lifts[b], src.morphisms[c]);
            let d = t
                .hom(t.tgt(lifts[a]), t.tgt(lifts[b]))
                .iter()
                .copied()
                .find(|&d| t.compose(d, lifts[a]) == wanted)
                .expect("cocartesian lift");
            x.local_morphism(d).expect("fiber morphism")
        })
        .collect();
    FunctorData::new_unchecked(src.cat.clone(), dst.cat.clone(), obj_map, mor_map)
}

/// The functor fiber `i+1` → fiber `i` induced by cartesian lifts (one per
/// object of level `i+1`).
pub fn classify_cartesian_with(x: &Correspondence, i: usize, lifts: &[Mor]) -> FunctorData {
    let t = x.total();
    let (src, dst) = (x.fiber(i + 1), x.fiber(i));
    let obj_map: Vec<Obj> = lifts.iter().map(|&r| x.local(t.src(r))).collect();
    let mor_map = src
        .cat
        .morphisms()
        .map(|d| {
            let (a, b) = (src.cat.src(d), src.cat.tgt(d));
            let wanted = t.compose(src.morphisms[d], lifts[a]);
            let c = t
                .hom(t.src(lifts[a]), t.src(lifts[b]))
                .iter()
                .copied()
                .find(|&c| t.compose(lifts[b], c) == wanted)
                .expect("cartesian lift");
            x.local_morphism(c).expect("fiber morphism")
        })
        .collect();
    FunctorData::new_unchecked(src.cat.clone(), dst.cat.clone(), obj_map, mor_map)
}

/// A witness if every object below the top level has a cocartesian lift to
/// the next level; least indices are chosen.
pub fn check_cocartesian(x: &Correspondence) -> Result<CocartWitness, CorrespondenceError> {
    let t = x.total();
    let mut lifts = Vec::with_capacity(x.base_length());
    for i in 0..x.base_length() {
        let mut level = Vec::new();
        for &a in x.objects_at(i) {
            let Some(&l) = cocartesian_lifts(x, a).first() else {
                return Err(CorrespondenceError::NotCocartesian { object: t.object_name(a).to_string(), level: i + 1 });
            };
            level.push(l);
        }
        lifts.push(level);
    }
    for i in 0..x.base_length().saturating_sub(1) {
        for &l in &lifts[i] {
            let next = lifts[i + 1][x.local(t.tgt(l))];
            if !couniversal(x, t.compose(next, l)) {
                return Err(CorrespondenceError::Internal("composite of cocartesian lifts is not cocartesian".into()));
            }
        }
    }
    let classifying = (0..x.base_length()).map(|i| classify_with(x, i, &lifts[i])).collect();
    Ok(CocartWitness { lifts, classifying })
}

/// A witness if every object above the bottom level has a cartesian lift
/// from the previous level.
pub fn check_cartesian(x: &Correspondence) -> Result<CartWitness, CorrespondenceError> {
    let t = x.total();
    let mut lifts = Vec::with_capacity(x.base_length());
    for i in 0..x.base_length() {
        let mut level = Vec::new();
        for &b in x.objects_at(i + 1) {
            let Some(&r) = cartesian_lifts(x, b).first() else {
                return Err(CorrespondenceError::NotCartesian { object: t.object_name(b).to_string(), level: i });
            };
            level.push(r);
        }
        lifts.push(level);
    }
    let classifying = (0..x.base_length()).map(|i| classify_cartesian_with(x, i, &lifts[i])).collect();
    Ok(CartWitness { lifts, classifying })
}

/// The classifying functor fiber 0 → fiber 1.
pub fn classify_cocartesian(_x: &Correspondence, w: &CocartWitness) -> FunctorData {
    w.classifying[0].clone()
}

/// The classifying functor fiber 1 → fiber 0.
pub fn classify_cartesian(_x: &Correspondence, w: &CartWitness) -> FunctorData {
    w.classifying[0].clone()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog;
    use crate::category::{product_with_chain, FinCat, MorphismInfo};
    use crate::correspondence::{grothendieck_cart, grothendieck_cocart};
    use crate::natural::find_natural_iso;

    fn over_arrow(total: FinCat, degree: Vec<usize>) -> Correspondence {
        Correspondence::new(Arc::new(total), 1, degree).unwrap()
    }

    #[test]
    fn identity_cross_arrow_is_cocartesian() {
        let f = FunctorData::constant(Arc::new(catalog::arrow()), Arc::new(catalog::arrow()), 1);
        let e = grothendieck_cocart(&f);
        for &x in e.objects_at(0) {
            let id_fx = e.total().find_morphism(&format!("id_1@{}", e.total().object_name(x))).unwrap();
            assert!(is_cocartesian_arrow(&e, id_fx).unwrap());
        }
    }

    #[test]
    fn projection_lifts_are_cocartesian() {
        let c = catalog::cospan();
        let total = product_with_chain(&c, 1);
        let deg = total.objects().map(|x| x % 2).collect();
        let x = over_arrow(total, deg);
        let chain_mor = 3; // morphisms of [1]: id_0, 0<1, id_1
        for obj in c.objects() {
            let m = c.identity(obj) * chain_mor + 1;
            assert!(is_cocartesian_arrow(&x, m).unwrap());
        }
        let w = check_cocartesian(&x).unwrap();
        let cls = classify_cocartesian(&x, &w);
        assert_eq!(cls.obj_map(), &[0, 1, 2]);
    }

    #[test]
    fn non_cartesian_arrow_in_cart_construction() {
        // F_f for f = the constant at 0 on [1]: the cross arrow d1 → c
        // over u fails universality
        let f = FunctorData::constant(Arc::new(catalog::arrow()), Arc::new(catalog::arrow()), 0);
        let ff = grothendieck_cart(&f);
        let t = ff.total();
        let mut verdicts = Vec::new();
        for m in ff.cross_morphisms(0, 1) {
            verdicts.push(is_cocartesian_arrow(&ff, m).unwrap());
            // oracle: count homs at the other level
            let (a, b) = (t.src(m), t.tgt(m));
            let oracle = ff.objects_at(1).iter().all(|&z| {
                let img: std::collections::BTreeSet<_> = t.hom(b, z).iter().map(|&g| t.compose(g, m)).collect();
                img.len() == t.hom(a, z).len() && t.hom(b, z).len() == t.hom(a, z).len()
            });
            assert_eq!(*verdicts.last().unwrap(), oracle);
        }
        assert!(verdicts.contains(&false));
    }

    #[test]
    fn empty_cross_hom_has_no_witness() {
        let total = catalog::discrete(2);
        let x = over_arrow(total, vec![0, 1]);
        assert!(matches!(check_cocartesian(&x), Err(CorrespondenceError::NotCocartesian { .. })));
    }

    #[test]
    fn two_targets_no_couniversal_arrow() {
        // c → d0, c → d1 with d0, d1 discrete
        let morphisms = vec![
            MorphismInfo { name: "id_c".into(), src: 0, tgt: 0 },
            MorphismInfo { name: "id_d0".into(), src: 1, tgt: 1 },
            MorphismInfo { name: "id_d1".into(), src: 2, tgt: 2 },
            MorphismInfo { name: "p".into(), src: 0, tgt: 1 },
            MorphismInfo { name: "q".into(), src: 0, tgt: 2 },
        ];
        let total = FinCat::try_from_fn(vec!["c".into(), "d0".into(), "d1".into()], morphisms, vec![0, 1, 2], |g, f| {
            if g <= 2 {
                f
            } else {
                g
            }
        })
        .unwrap();
        let x = over_arrow(total, vec![0, 1, 1]);
        assert!(!is_cocartesian_arrow(&x, 3).unwrap());
        assert!(!is_cocartesian_arrow(&x, 4).unwrap());
        assert!(check_cocartesian(&x).is_err());
    }

    #[test]
    fn fiber_arrow_has_bad_degrees() {
        let e = grothendieck_cocart(&FunctorData::identity(Arc::new(catalog::arrow())));
        assert!(matches!(is_cocartesian_arrow(&e, 1), Err(CorrespondenceError::BadDegrees(_))));
    }

    #[test]
    fn classification_of_constant() {
        let d = Arc::new(catalog::span());
        let f = FunctorData::constant(Arc::new(catalog::arrow()), d.clone(), 2);
        let e = grothendieck_cocart(&f);
        let w = check_cocartesian(&e).unwrap();
        let g = classify_cocartesian(&e, &w);
        assert!(find_natural_iso(&g, &f).is_some());
    }

    #[test]
    fn other_lifts_give_isomorphic_classifications() {
        let g = Arc::new(catalog::indiscrete(2));
        let f = FunctorData::identity(g);
        let e = grothendieck_cocart(&f);
        let w = check_cocartesian(&e).unwrap();
        let last: Vec<Mor> = e.objects_at(0).iter().map(|&a| *cocartesian_lifts(&e, a).last().unwrap()).collect();
        assert_ne!(last, w.lifts[0]);
        let other = classify_with(&e, 0, &last);
        assert!(find_natural_iso(&other, &w.classifying[0]).is_some());
    }

    #[test]
    fn cart_construction_classifies_back() {
        let f = FunctorData::new(Arc::new(catalog::arrow()), Arc::new(catalog::cospan()), vec![0, 2], vec![0, 1, 4])
            .unwrap();
        let ff = grothendieck_cart(&f);
        let w = check_cartesian(&ff).unwrap();
        assert!(find_natural_iso(&classify_cartesian(&ff, &w), &f).is_some());
    }
}
