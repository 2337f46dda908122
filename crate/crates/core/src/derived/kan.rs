//! Categories of right extensions and right Kan extensions by exhaustive
//! search.

use std::collections::HashMap;

use crate::category::{FinCat, Mor, MorphismInfo, Obj};
use crate::functor::{all_functors, FunctorData};
use crate::natural::{natural_transformations, NatTrans};

/// Objects `(f′, θ: f′ ∘ q ⇒ f)`; morphisms `μ: f′ ⇒ f″` with
/// `θ′ = θ″ ∘ μq`.
#[derive(Clone, Debug)]
pub struct ReCategory {
    pub category: FinCat,
    pub objects: Vec<(FunctorData, NatTrans)>,
    pub morphisms: Vec<NatTrans>,
}

impl ReCategory {
    pub fn is_terminal(&self, o: Obj) -> bool {
        self.category.objects().all(|x| self.category.hom(x, o).len() == 1)
    }

    pub fn terminal(&self) -> Option<Obj> {
        self.category.objects().find(|&o| self.is_terminal(o))
    }

    /// Index of the object `(f′, θ)`.
    pub fn find(&self, extension: &FunctorData, theta: &NatTrans) -> Option<Obj> {
        self.objects.iter().position(|(g, t)| {
            g.obj_map() == extension.obj_map() && g.mor_map() == extension.mor_map() && t.components == theta.components
        })
    }
}

pub fn re_category(f: &FunctorData, q: &FunctorData) -> ReCategory {
    let (c_loc, d) = (q.target(), f.target());
    let objects: Vec<(FunctorData, NatTrans)> = all_functors(c_loc, d)
        .into_iter()
        .flat_map(|g| {
            let thetas = natural_transformations(&q.then_unchecked(&g), f).unwrap_or_default();
            thetas.into_iter().map(move |t| (g.clone(), t))
        })
        .collect();
    let mut morphisms = Vec::new();
    let mut info = Vec::new();
    let mut index = HashMap::new();
    let mut identities = vec![0; objects.len()];
    for (i, (gi, ti)) in objects.iter().enumerate() {
        for (j, (gj, tj)) in objects.iter().enumerate() {
            for mu in natural_transformations(gi, gj).unwrap_or_default() {
                let compatible = q.source().objects().all(|x| ti.components[x] == d.compose(tj.components[x], mu.components[q.obj(x)]));
                if !compatible {
                    continue;
                }
                let k = morphisms.len();
                if i == j && mu.components.iter().all(|&m| d.is_identity(m)) {
                    identities[i] = k;
                }
                index.insert((i, j, mu.components.clone()), k);
                info.push(MorphismInfo { name: format!("mu{k}"), src: i, tgt: j });
                morphisms.push(mu);
            }
        }
    }
    let names = (0..objects.len()).map(|i| format!("e{i}")).collect();
    let category = FinCat::from_fn(names, info.clone(), identities, |g: Mor, h: Mor| {
        let (a, b) = (&morphisms[h], &morphisms[g]);
        index[&(info[h].src, info[g].tgt, a.then(b).components)]
    });
    ReCategory { category, objects, morphisms }
}

/// A terminal object of `RE_q(f)`.
pub fn right_kan_extension(f: &FunctorData, q: &FunctorData) -> Option<(FunctorData, NatTrans)> {
    let re = re_category(f, q);
    re.terminal().map(|o| re.objects[o].clone())
}

/// Whether `(t ∘ f′, tθ)` is terminal in `RE_q(t ∘ f)` for every test
/// functor `t` out of the target of `f`.
pub fn check_absolute(extension: &FunctorData, theta: &NatTrans, q: &FunctorData, f: &FunctorData, tests: &[FunctorData]) -> bool {
    tests.iter().all(|t| {
        let re = re_category(&f.then_unchecked(t), q);
        let moved = extension.then_unchecked(t);
        let moved_theta = theta.whisker_left(t);
        re.find(&moved, &moved_theta).is_some_and(|o| re.is_terminal(o))
    })
}
