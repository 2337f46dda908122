//! (Co)cartesian arrows for arbitrary functors and the (lax)
//! bifibration criteria for functors into a product `B × C`.

use std::sync::Arc;

use crate::category::{product, FinCat, Mor};
use crate::error::CorrespondenceError;
use crate::functor::FunctorData;

/// `m: a → b` is `p`-cocartesian: for every `z`, `g ↦ (g ∘ m, p(g))` is a
/// bijection from `Hom(b, z)` onto pairs `(h, ψ)` with `p(h) = ψ ∘ p(m)`.
pub fn is_p_cocartesian(p: &FunctorData, m: Mor) -> bool {
    let (x, base) = (p.source(), p.target());
    let (a, b) = (x.src(m), x.tgt(m));
    let pm = p.mor(m);
    x.objects().all(|z| {
        let targets: usize = x
            .hom(a, z)
            .iter()
            .map(|&h| base.hom(p.obj(b), p.obj(z)).iter().filter(|&&psi| base.compose(psi, pm) == p.mor(h)).count())
            .sum();
        let mut images: Vec<(Mor, Mor)> = x.hom(b, z).iter().map(|&g| (x.compose(g, m), p.mor(g))).collect();
        images.sort_unstable();
        images.dedup();
        images.len() == x.hom(b, z).len() && images.len() == targets
    })
}

/// `m: a → b` is `p`-cartesian: for every `z`, `g ↦ (m ∘ g, p(g))` is a
/// bijection from `Hom(z, a)` onto pairs `(h, ψ)` with `p(h) = p(m) ∘ ψ`.
pub fn is_p_cartesian(p: &FunctorData, m: Mor) -> bool {
    let (x, base) = (p.source(), p.target());
    let (a, b) = (x.src(m), x.tgt(m));
    let pm = p.mor(m);
    x.objects().all(|z| {
        let targets: usize = x
            .hom(z, b)
            .iter()
            .map(|&h| base.hom(p.obj(z), p.obj(a)).iter().filter(|&&psi| base.compose(pm, psi) == p.mor(h)).count())
            .sum();
        let mut images: Vec<(Mor, Mor)> = x.hom(z, a).iter().map(|&g| (x.compose(m, g), p.mor(g))).collect();
        images.sort_unstable();
        images.dedup();
        images.len() == x.hom(z, a).len() && images.len() == targets
    })
}

/// Least-index cocartesian lift of `psi` out of `x`.
fn cocartesian_lift(p: &FunctorData, x: usize, psi: Mor) -> Option<Mor> {
    let e = p.source();
    e.morphisms().find(|&m| e.src(m) == x && p.mor(m) == psi && is_p_cocartesian(p, m))
}

/// Least-index cartesian lift of `psi` into `y`.
fn cartesian_lift(p: &FunctorData, y: usize, psi: Mor) -> Option<Mor> {
    let e = p.source();
    e.morphisms().find(|&m| e.tgt(m) == y && p.mor(m) == psi && is_p_cartesian(p, m))
}

pub fn is_cocartesian_fibration(p: &FunctorData) -> bool {
    let (e, base) = (p.source(), p.target());
    e.objects().all(|x| {
        base.morphisms()
            .filter(|&psi| base.src(psi) == p.obj(x))
            .all(|psi| cocartesian_lift(p, x, psi).is_some())
    })
}

pub fn is_cartesian_fibration(p: &FunctorData) -> bool {
    let (e, base) = (p.source(), p.target());
    e.objects().all(|y| {
        base.morphisms()
            .filter(|&psi| base.tgt(psi) == p.obj(y))
            .all(|psi| cartesian_lift(p, y, psi).is_some())
    })
}

/// Outcome of every condition involved in the (lax) bifibration criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BifibrationReport {
    pub cartesian_over_b: bool,
    pub cocartesian_over_c: bool,
    /// `p` carries `p_B`-cartesian arrows to `(β, iso)`.
    pub preserves_cartesian: bool,
    /// `p` carries `p_C`-cocartesian arrows to `(iso, γ)`.
    pub preserves_cocartesian: bool,
    /// Criterion via `p_C` and the fibers `X_{•c}`.
    pub criterion_1: bool,
    /// Criterion via `p_B` and the fibers `X_{b•}`.
    pub criterion_2: bool,
    pub lax: bool,
    /// Every `β^!` preserves `p_C`-cocartesian arrows.
    pub pullbacks_preserve: Option<bool>,
    /// Every `γ_!` preserves `p_B`-cartesian arrows.
    pub pushforwards_preserve: Option<bool>,
}

impl BifibrationReport {
    pub fn is_bifibration(&self) -> bool {
        self.lax && self.pullbacks_preserve == Some(true)
    }
}

struct Split {
    p: FunctorData,
    p_b: FunctorData,
    p_c: FunctorData,
    b: Arc<FinCat>,
    c: Arc<FinCat>,
}

impl Split {
    fn new(p: &FunctorData, b: &Arc<FinCat>, c: &Arc<FinCat>) -> Result<Self, CorrespondenceError> {
        let bc = product(b, c);
        if !bc.same_table(p.target()) {
            return Err(CorrespondenceError::Internal("target is not the product of the given factors".into()));
        }
        let (nco, ncm) = (c.num_objects(), c.num_morphisms());
        let x = p.source().clone();
        let p_b = FunctorData::new_unchecked(
            x.clone(),
            b.clone(),
            p.obj_map().iter().map(|&o| o / nco).collect(),
            p.mor_map().iter().map(|&m| m / ncm).collect(),
        );
        let p_c = FunctorData::new_unchecked(
            x,
            c.clone(),
            p.obj_map().iter().map(|&o| o % nco).collect(),
            p.mor_map().iter().map(|&m| m % ncm).collect(),
        );
        Ok(Self { p: p.clone(), p_b, p_c, b: b.clone(), c: c.clone() })
    }

    fn parts(&self, m: Mor) -> (Mor, Mor) {
        let ncm = self.c.num_morphisms();
        let pm = self.p.mor(m);
        (pm / ncm, pm % ncm)
    }

    /// The subcategory of `X` lying over one object of a factor, with the
    /// restriction of the other projection.
    fn fiber(&self, over_b: Option<usize>, over_c: Option<usize>) -> (FunctorData, FunctorData, Vec<Mor>) {
        let x = self.p.source();
        let objects: Vec<usize> = x
            .objects()
            .filter(|&o| over_b.map_or(true, |b| self.p_b.obj(o) == b) && over_c.map_or(true, |c| self.p_c.obj(o) == c))
            .collect();
        let morphisms: Vec<Mor> = x
            .morphisms()
            .filter(|&m| objects.contains(&x.src(m)) && objects.contains(&x.tgt(m)))
            .filter(|&m| {
                let (mb, mc) = self.parts(m);
                over_b.map_or(true, |_| self.b.is_identity(mb)) && over_c.map_or(true, |_| self.c.is_identity(mc))
            })
            .collect();
        let (sub, kept) = x.subcategory(&objects, &morphisms);
        let sub = Arc::new(sub);
        let restrict = |f: &FunctorData| {
            FunctorData::new_unchecked(
                sub.clone(),
                f.target().clone(),
                objects.iter().map(|&o| f.obj(o)).collect(),
                kept.iter().map(|&m| f.mor(m)).collect(),
            )
        };
        (restrict(&self.p_b), restrict(&self.p_c), kept)
    }
}

/// Checks all the conditions of the lax bifibration definition and of the
/// equivalent criteria, and (when lax) the two preservation conditions of
/// a bifibration.
pub fn bifibration_report(
    p: &FunctorData,
    b: &Arc<FinCat>,
    c: &Arc<FinCat>,
) -> Result<BifibrationReport, CorrespondenceError> {
    let s = Split::new(p, b, c)?;
    let x = p.source();
    let cartesian_over_b = is_cartesian_fibration(&s.p_b);
    let cocartesian_over_c = is_cocartesian_fibration(&s.p_c);
    let preserves_cartesian = x
        .morphisms()
        .filter(|&m| is_p_cartesian(&s.p_b, m))
        .all(|m| s.c.is_iso(s.parts(m).1));
    let preserves_cocartesian = x
        .morphisms()
        .filter(|&m| is_p_cocartesian(&s.p_c, m))
        .all(|m| s.b.is_iso(s.parts(m).0));
    let fibers_over_c_cartesian = s.c.objects().all(|cc| is_cartesian_fibration(&s.fiber(None, Some(cc)).0));
    let fibers_over_b_cocartesian = s.b.objects().all(|bb| is_cocartesian_fibration(&s.fiber(Some(bb), None).1));
    let lax = cartesian_over_b && cocartesian_over_c && preserves_cartesian && preserves_cocartesian;
    let criterion_1 = cocartesian_over_c && preserves_cocartesian && fibers_over_c_cartesian;
    let criterion_2 = cartesian_over_b && preserves_cartesian && fibers_over_b_cocartesian;
    let (pullbacks_preserve, pushforwards_preserve) = if lax {
        (Some(pullbacks_preserve(&s)), Some(pushforwards_preserve(&s)))
    } else {
        (None, None)
    };
    Ok(BifibrationReport {
        cartesian_over_b,
        cocartesian_over_c,
        preserves_cartesian,
        preserves_cocartesian,
        criterion_1,
        criterion_2,
        lax,
        pullbacks_preserve,
        pushforwards_preserve,
    })
}

/// For `β: b → b'`, the image under `β^!` of each cocartesian arrow of
/// `X_{b'•} → C` is cocartesian for `X_{b•} → C`.
fn pullbacks_preserve(s: &Split) -> bool {
    let x = s.p.source();
    s.b.morphisms().all(|beta| {
        let (bs, bt) = (s.b.src(beta), s.b.tgt(beta));
        let (_, upper_c, upper_kept) = s.fiber(Some(bt), None);
        let (_, lower_c, lower_kept) = s.fiber(Some(bs), None);
        upper_c.source().morphisms().filter(|&m| is_p_cocartesian(&upper_c, m)).all(|m| {
            let m = upper_kept[m];
            let (ry, ry2) = match (cartesian_lift(&s.p_b, x.src(m), beta), cartesian_lift(&s.p_b, x.tgt(m), beta)) {
                (Some(a), Some(b)) => (a, b),
                _ => return false,
            };
            let wanted = x.compose(m, ry);
            let n = x
                .hom(x.src(ry), x.src(ry2))
                .iter()
                .copied()
                .find(|&n| s.b.is_identity(s.parts(n).0) && x.compose(ry2, n) == wanted);
            match n.and_then(|n| lower_kept.iter().position(|&k| k == n)) {
                Some(local) => is_p_cocartesian(&lower_c, local),
                None => false,
            }
        })
    })
}

/// For `γ: c → c'`, the image under `γ_!` of each cartesian arrow of
/// `X_{•c} → B` is cartesian for `X_{•c'} → B`.
fn pushforwards_preserve(s: &Split) -> bool {
    let x = s.p.source();
    s.c.morphisms().all(|gamma| {
        let (cs, ct) = (s.c.src(gamma), s.c.tgt(gamma));
        let (lower_b, _, lower_kept) = s.fiber(None, Some(cs));
        let (upper_b, _, upper_kept) = s.fiber(None, Some(ct));
        lower_b.source().morphisms().filter(|&m| is_p_cartesian(&lower_b, m)).all(|m| {
            let m = lower_kept[m];
            let (lx, lx2) = match (cocartesian_lift(&s.p_c, x.src(m), gamma), cocartesian_lift(&s.p_c, x.tgt(m), gamma)) {
                (Some(a), Some(b)) => (a, b),
                _ => return false,
            };
            let wanted = x.compose(lx2, m);
            let n = x
                .hom(x.tgt(lx), x.tgt(lx2))
                .iter()
                .copied()
                .find(|&n| s.c.is_identity(s.parts(n).1) && x.compose(n, lx) == wanted);
            match n.and_then(|n| upper_kept.iter().position(|&k| k == n)) {
                Some(local) => is_p_cartesian(&upper_b, local),
                None => false,
            }
        })
    })
}

fn consistent(r: &BifibrationReport) -> Result<(), CorrespondenceError> {
    if r.criterion_1 != r.lax || r.criterion_2 != r.lax {
        return Err(CorrespondenceError::Internal("lax bifibration criteria disagree".into()));
    }
    if r.pullbacks_preserve != r.pushforwards_preserve {
        return Err(CorrespondenceError::Internal("bifibration preservation conditions disagree".into()));
    }
    Ok(())
}

pub fn check_lax_bifibration(p: &FunctorData, b: &Arc<FinCat>, c: &Arc<FinCat>) -> Result<bool, CorrespondenceError> {
    let r = bifibration_report(p, b, c)?;
    consistent(&r)?;
    Ok(r.lax)
}

pub fn check_bifibration(p: &FunctorData, b: &Arc<FinCat>, c: &Arc<FinCat>) -> Result<bool, CorrespondenceError> {
    let r = bifibration_report(p, b, c)?;
    consistent(&r)?;
    Ok(r.is_bifibration())
}
