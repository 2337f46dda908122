//! Presentations by generating arrows and relations, compiled to explicit
//! composition tables.

use crate::category::{FinCat, Mor, Obj};
use crate::enumerate::{enumerate, Letter, Limits, Outcome, Relation};
use crate::error::PresentationError;

/// A path of generators out of `src`, in application order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub src: Obj,
    pub letters: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub src: Obj,
    pub tgt: Obj,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    objects: Vec<String>,
    generators: Vec<Generator>,
    relations: Vec<(Path, Path)>,
}

impl Presentation {
    pub fn new(
        objects: Vec<String>,
        generators: Vec<Generator>,
        relations: Vec<(Path, Path)>,
    ) -> Result<Self, PresentationError> {
        let p = Presentation { objects, generators, relations };
        for g in &p.generators {
            if g.src >= p.objects.len() || g.tgt >= p.objects.len() {
                return Err(PresentationError::IllFormed(format!("generator {} has a dangling endpoint", g.name)));
            }
        }
        for (lhs, rhs) in &p.relations {
            let a = p.path_target(lhs)?;
            let b = p.path_target(rhs)?;
            if lhs.src != rhs.src || a != b {
                return Err(PresentationError::IllFormed(format!(
                    "relation {} = {} is not between parallel paths",
                    p.path_name(lhs),
                    p.path_name(rhs)
                )));
            }
        }
        Ok(p)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[(Path, Path)] {
        &self.relations
    }

    fn path_target(&self, path: &Path) -> Result<Obj, PresentationError> {
        if path.src >= self.objects.len() {
            return Err(PresentationError::IllFormed("path starts at an unknown object".into()));
        }
        let mut at = path.src;
        for &l in &path.letters {
            let g = self
                .generators
                .get(l)
                .ok_or_else(|| PresentationError::IllFormed(format!("unknown generator index {l}")))?;
            if g.src != at {
                return Err(PresentationError::IllFormed(format!("path {} is not composable", self.path_name(path))));
            }
            at = g.tgt;
        }
        Ok(at)
    }

    /// Right-to-left dotted name, e.g. `g.f`.
    pub fn path_name(&self, path: &Path) -> String {
        if path.letters.is_empty() {
            return format!("id_{}", self.objects.get(path.src).map_or("?", String::as_str));
        }
        path.letters
            .iter()
            .rev()
            .map(|&l| self.generators.get(l).map_or("?", |g| g.name.as_str()))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// The same presentation with generators listed in the order `perm`
    /// (`perm[new] = old`).
    pub fn permute_generators(&self, perm: &[usize]) -> Presentation {
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let map = |p: &Path| Path { src: p.src, letters: p.letters.iter().map(|&l| inverse[l]).collect() };
        Presentation {
            objects: self.objects.clone(),
            generators: perm.iter().map(|&old| self.generators[old].clone()).collect(),
            relations: self.relations.iter().map(|(a, b)| (map(a), map(b))).collect(),
        }
    }
}

/// Work allowance for the enumeration relative to the requested bound.
fn state_budget(max_morphisms: usize) -> usize {
    max_morphisms.saturating_mul(32).saturating_add(256)
}

/// A compiled presentation: the quotient category, the morphism each
/// generator denotes, and the normal-form path of every morphism.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub category: FinCat,
    pub generators: Vec<Mor>,
    pub words: Vec<Path>,
}

/// Compiles a presentation to its quotient category, provided that the
/// quotient has at most `max_morphisms` morphisms.
///
/// Morphisms are ordered shortlex by their representative generator path:
/// identities first (in object order), then generators, then longer
/// composites.
pub fn compile_presentation(pres: &Presentation, max_morphisms: usize) -> Result<FinCat, PresentationError> {
    compile_with_words(pres, max_morphisms).map(|c| c.category)
}

pub fn compile_with_words(pres: &Presentation, max_morphisms: usize) -> Result<Compiled, PresentationError> {
    let letters: Vec<Letter> = pres
        .generators
        .iter()
        .map(|g| Letter { name: g.name.clone(), src: g.src, tgt: g.tgt })
        .collect();
    let relations: Vec<Relation> = pres
        .relations
        .iter()
        .map(|(a, b)| Relation { src: a.src, lhs: a.letters.clone(), rhs: b.letters.clone() })
        .collect();
    let limits = Limits { max_states: state_budget(max_morphisms), max_word_len: None };
    match enumerate(&pres.objects, &letters, &relations, limits) {
        Outcome::Complete(q) if q.category.num_morphisms() <= max_morphisms => Ok(Compiled {
            category: q.category,
            generators: q.letters,
            words: q.classes.into_iter().map(|(src, letters)| Path { src, letters }).collect(),
        }),
        _ => Err(PresentationError::BudgetExceeded { limit: max_morphisms }),
    }
}
