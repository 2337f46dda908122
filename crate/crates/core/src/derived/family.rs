//! Families of functors over a finite base category: per-arrow derived
//! functors and per-triangle composition certificates.

use std::sync::Arc;

use super::adjunction::{derive_adjoint_pair, find_right_adjoint, DerivedAdjunction};
use super::left::left_derived;
use super::{comparison, DeriveOptions};
use crate::category::{chain, chain_arrow, FinCat, Mor};
use crate::correspondence::{grothendieck_chain, grothendieck_cocart, Correspondence};
use crate::error::DerivedError;
use crate::functor::FunctorData;
use crate::localization::{localize, LocalizationResult};
use crate::marking::Marking;
use crate::natural::{find_natural_iso, NatTrans};

/// A strict functor `B → Cat` with a marking on every fiber.
#[derive(Clone, Debug)]
pub struct FamilyData {
    pub base: Arc<FinCat>,
    pub fibers: Vec<Arc<FinCat>>,
    /// One functor per morphism of the base.
    pub functors: Vec<FunctorData>,
    pub markings: Vec<Marking>,
}

impl FamilyData {
    /// The family over `[n]` generated by a chain of composable functors.
    pub fn from_chain(functors: &[FunctorData], markings: Vec<Marking>) -> Result<Self, DerivedError> {
        let n = functors.len();
        let base = Arc::new(chain(n));
        let mut fibers: Vec<Arc<FinCat>> = Vec::with_capacity(n + 1);
        fibers.push(markings[0].host().clone());
        for f in functors {
            fibers.push(f.target().clone());
        }
        let mut all = vec![None; base.num_morphisms()];
        for i in 0..=n {
            let mut acc = FunctorData::identity(fibers[i].clone());
            all[chain_arrow(n, i, i)] = Some(acc.clone());
            for (j, f) in functors.iter().enumerate().skip(i) {
                acc = acc.then(f)?;
                all[chain_arrow(n, i, j + 1)] = Some(acc.clone());
            }
        }
        let functors = all.into_iter().map(|f| f.expect("every arrow of the chain")).collect();
        Ok(Self { base, fibers, functors, markings })
    }

    fn arrow_name(&self, m: Mor) -> String {
        self.base.morphism_name(m).to_string()
    }

    /// Strict functoriality of the assignment.
    pub fn check(&self) -> Result<(), DerivedError> {
        let b = &self.base;
        let failed = |what: String| Err(DerivedError::HypothesisFailed(format!("not functorial at {what}")));
        for m in b.morphisms() {
            let f = &self.functors[m];
            if !f.source().same_table(&self.fibers[b.src(m)]) || !f.target().same_table(&self.fibers[b.tgt(m)]) {
                return failed(self.arrow_name(m));
            }
            if b.is_identity(m) && (f.mor_map().iter().enumerate().any(|(k, &v)| k != v) || f.obj_map().iter().enumerate().any(|(k, &v)| k != v)) {
                return failed(self.arrow_name(m));
            }
        }
        for alpha in b.morphisms() {
            for beta in b.morphisms().filter(|&beta| b.src(beta) == b.tgt(alpha)) {
                let composed = self.functors[alpha].then_unchecked(&self.functors[beta]);
                let gamma = &self.functors[b.compose(beta, alpha)];
                if composed.obj_map() != gamma.obj_map() || composed.mor_map() != gamma.mor_map() {
                    return failed(format!("{}∘{}", self.arrow_name(beta), self.arrow_name(alpha)));
                }
            }
        }
        Ok(())
    }
}

/// `𝐋F(γ) ≅ 𝐋F(β) ∘ 𝐋F(α)` for `γ = β ∘ α`.
#[derive(Clone, Debug)]
pub struct TriangleCertificate {
    pub alpha: Mor,
    pub beta: Mor,
    pub iso: NatTrans,
}

#[derive(Clone, Debug)]
pub struct FamilyResult {
    pub base: Arc<FinCat>,
    /// Shared localization of every fiber.
    pub localized: Vec<LocalizationResult>,
    /// `𝐋F(α)` between the shared localizations, per morphism of the base.
    pub derived: Vec<FunctorData>,
    pub triangles: Vec<TriangleCertificate>,
    /// Grothendieck constructions of the localized family over each
    /// non-degenerate chain of length one or two, keyed by its arrows.
    pub chains: Vec<(Vec<Mor>, Correspondence)>,
    /// Derived adjunctions per non-identity morphism, when requested.
    pub adjunctions: Vec<Option<DerivedAdjunction>>,
}

pub fn derive_family(data: &FamilyData, opts: DeriveOptions) -> Result<FamilyResult, DerivedError> {
    data.check()?;
    let b = data.base.clone();
    let localized: Vec<LocalizationResult> = data.markings.iter().map(|w| localize(w, opts.depth)).collect::<Result<_, _>>()?;
    let mut derived = Vec::with_capacity(b.num_morphisms());
    for m in b.morphisms() {
        let (s, t) = (b.src(m), b.tgt(m));
        if b.is_identity(m) {
            derived.push(FunctorData::identity(localized[s].localized().clone()));
            continue;
        }
        let r = left_derived(&data.functors[m], &data.markings[s], &data.markings[t], opts)?;
        let Some(g) = r.derived.as_ref() else {
            return Err(DerivedError::HypothesisFailed(format!("arrow {} has no left derived functor", data.arrow_name(m))));
        };
        let into = comparison(localized[s].q(), &r.q_c);
        let out = comparison(&r.q_d, localized[t].q());
        let (Some(into), Some(out)) = (into, out) else {
            return Err(DerivedError::InternalContradiction("fiber localizations differ".into()));
        };
        derived.push(into.then_unchecked(g).then_unchecked(&out));
    }
    let mut triangles = Vec::new();
    let mut chains = Vec::new();
    for alpha in b.morphisms().filter(|&a| !b.is_identity(a)) {
        chains.push((vec![alpha], grothendieck_cocart(&derived[alpha])));
        for beta in b.morphisms().filter(|&beta| !b.is_identity(beta) && b.src(beta) == b.tgt(alpha)) {
            let gamma = b.compose(beta, alpha);
            let composite = derived[alpha].then_unchecked(&derived[beta]);
            let iso = find_natural_iso(&derived[gamma], &composite).ok_or_else(|| {
                DerivedError::HypothesisFailed(format!("triangle {}∘{}", data.arrow_name(beta), data.arrow_name(alpha)))
            })?;
            triangles.push(TriangleCertificate { alpha, beta, iso });
            chains.push((vec![alpha, beta], grothendieck_chain(&[derived[alpha].clone(), derived[beta].clone()])?));
        }
    }
    let adjunctions = vec![None; b.num_morphisms()];
    Ok(FamilyResult { base: b, localized, derived, triangles, chains, adjunctions })
}

/// [`derive_family`] together with a derived adjoint pair per arrow.
pub fn derive_adjoint_family(data: &FamilyData, opts: DeriveOptions) -> Result<FamilyResult, DerivedError> {
    let b = &data.base;
    let mut rights = vec![None; b.num_morphisms()];
    for m in b.morphisms().filter(|&m| !b.is_identity(m)) {
        let (g, _) = find_right_adjoint(&data.functors[m])
            .ok_or_else(|| DerivedError::HypothesisFailed(format!("arrow {} has no right adjoint", data.arrow_name(m))))?;
        rights[m] = Some(g);
    }
    let mut result = derive_family(data, opts)?;
    for m in b.morphisms().filter(|&m| !b.is_identity(m)) {
        let g = rights[m].as_ref().expect("right adjoint");
        let (s, t) = (b.src(m), b.tgt(m));
        let pair = derive_adjoint_pair(&data.functors[m], g, &data.markings[s], &data.markings[t], opts).map_err(|e| match e {
            DerivedError::DerivedMissing(what) => DerivedError::DerivedMissing(format!("arrow {}: {what}", data.arrow_name(m))),
            other => other,
        })?;
        result.adjunctions[m] = Some(pair);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::derived::derive_pair_composition;
    use crate::functor::all_functors;
    use crate::marking::saturate_marking;

    fn opts() -> DeriveOptions {
        DeriveOptions::default()
    }

    #[test]
    fn single_arrow_matches_left_derived() {
        let a = Arc::new(catalog::arrow());
        let id = FunctorData::identity(a.clone());
        let (w, ids) = (saturate_marking(a.clone(), [1]), Marking::isos(a));
        let data = FamilyData::from_chain(&[id.clone()], vec![w.clone(), ids.clone()]).unwrap();
        let fam = derive_family(&data, opts()).unwrap();
        let direct = left_derived(&id, &w, &ids, opts()).unwrap().derived.unwrap();
        assert_eq!(fam.derived[1].obj_map(), direct.obj_map());
    }

    #[test]
    fn two_step_chain_agrees_with_pair_composition() {
        let a = Arc::new(catalog::arrow());
        let id = FunctorData::identity(a.clone());
        let (w, ids) = (saturate_marking(a.clone(), [1]), Marking::isos(a));
        for markings in [[&w, &ids, &w], [&w, &w, &w], [&ids, &ids, &ids], [&ids, &w, &ids]] {
            let pair = derive_pair_composition(&id, &id, markings, opts()).unwrap();
            let data = FamilyData::from_chain(&[id.clone(), id.clone()], markings.iter().map(|&m| m.clone()).collect()).unwrap();
            let fam = derive_family(&data, opts());
            let every_arrow = pair.left_f.exists() && pair.left_g.exists() && pair.left_gf.exists();
            assert_eq!(fam.is_ok(), every_arrow && pair.composite_agrees == Some(true));
        }
    }

    #[test]
    fn commutative_square_of_preserving_functors() {
        let square = Arc::new(catalog::poset(&["00", "01", "10", "11"], |x, y| x & y == x));
        let a = Arc::new(catalog::arrow());
        let w = saturate_marking(a.clone(), [1]);
        let functors = square.morphisms().map(|_| FunctorData::identity(a.clone())).collect();
        let data = FamilyData { base: square.clone(), fibers: vec![a.clone(); 4], functors, markings: vec![w; 4] };
        let fam = derive_family(&data, opts()).unwrap();
        assert_eq!(fam.triangles.len(), 2);
    }

    #[test]
    fn non_functorial_data_is_rejected() {
        let a = Arc::new(catalog::arrow());
        let ids = Marking::isos(a.clone());
        let mut data = FamilyData::from_chain(&vec![FunctorData::identity(a.clone()); 2], vec![ids; 3]).unwrap();
        data.functors[chain_arrow(2, 0, 2)] = FunctorData::constant(a.clone(), a, 0);
        assert!(matches!(derive_family(&data, opts()), Err(DerivedError::HypothesisFailed(_))));
    }

    #[test]
    fn galois_family_has_derived_adjunction() {
        let (c2, c1) = (Arc::new(chain(2)), Arc::new(chain(1)));
        let f = all_functors(&c2, &c1).into_iter().find(|f| f.obj_map() == [0, 0, 1]).unwrap();
        let w_c = saturate_marking(c2.clone(), [c2.find_morphism("1<2").unwrap()]);
        let data = FamilyData::from_chain(&[f], vec![w_c, Marking::isos(c1)]).unwrap();
        let fam = derive_adjoint_family(&data, opts()).unwrap();
        let pair = fam.adjunctions[1].as_ref().unwrap();
        assert!(pair.witness.triangles_hold(&pair.left, &pair.right));
    }
}
