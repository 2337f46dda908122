//! Markings: wide subcategories of weak equivalences.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::category::{FinCat, Mor};
use crate::functor::FunctorData;

/// A saturated marking on `host`: contains every identity and every
/// isomorphism and is closed under composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    host: Arc<FinCat>,
    members: Vec<bool>,
}

impl Marking {
    pub fn host(&self) -> &Arc<FinCat> {
        &self.host
    }

    pub fn contains(&self, m: Mor) -> bool {
        self.members[m]
    }

    pub fn members(&self) -> impl Iterator<Item = Mor> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(m, _)| m)
    }

    pub fn member_set(&self) -> BTreeSet<Mor> {
        self.members().collect()
    }

    /// Members that are not isomorphisms.
    pub fn non_isos(&self) -> impl Iterator<Item = Mor> + '_ {
        self.members().filter(move |&m| !self.host.is_iso(m))
    }

    /// The minimal marking (isomorphisms only).
    pub fn isos(host: Arc<FinCat>) -> Self {
        saturate_marking(host, [])
    }

    /// Every morphism of `host`.
    pub fn all(host: Arc<FinCat>) -> Self {
        let members = vec![true; host.num_morphisms()];
        Marking { host, members }
    }

    pub fn is_trivial(&self) -> bool {
        self.non_isos().next().is_none()
    }

    /// Transfers the marking along a structurally equal host.
    pub fn rehost(&self, host: Arc<FinCat>) -> Marking {
        debug_assert!(host.same_table(&self.host));
        Marking { host, members: self.members.clone() }
    }

    /// The same member set on the opposite category.
    pub fn opposite(&self, host_op: Arc<FinCat>) -> Marking {
        Marking { host: host_op, members: self.members.clone() }
    }

    /// Saturated preimage along `f`.
    pub fn preimage(&self, f: &FunctorData) -> Marking {
        let gens: Vec<Mor> = f.source().morphisms().filter(|&m| self.contains(f.mor(m))).collect();
        saturate_marking(f.source().clone(), gens)
    }

    /// Whether `f` carries every member into `target` (or to an iso).
    pub fn carried_into(&self, f: &FunctorData, target: &Marking) -> Option<Mor> {
        self.members().find(|&m| {
            let image = f.mor(m);
            !target.contains(image) && !f.target().is_iso(image)
        })
    }
}

/// The smallest marking containing `gens`.
pub fn saturate_marking(host: Arc<FinCat>, gens: impl IntoIterator<Item = Mor>) -> Marking {
    let mut members = vec![false; host.num_morphisms()];
    for m in host.morphisms() {
        if host.is_identity(m) || host.is_iso(m) {
            members[m] = true;
        }
    }
    for g in gens {
        members[g] = true;
    }
    let mut changed = true;
    while changed {
        changed = false;
        for g in host.morphisms() {
            for f in host.morphisms() {
                if !members[g] || !members[f] {
                    continue;
                }
                if let Some(h) = host.try_compose(g, f) {
                    if !members[h] {
                        members[h] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    Marking { host, members }
}
