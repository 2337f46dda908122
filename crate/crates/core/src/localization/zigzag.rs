//! Localization by enumerating zig-zags of bounded length.

use std::sync::Arc;

use super::{Certificate, Letter, LocalizationResult, Method};
use crate::category::Mor;
use crate::enumerate::{self, Limits, Outcome, Relation};
use crate::functor::FunctorData;
use crate::marking::Marking;

const MAX_STATES: usize = 1 << 20;

/// Outcome of the zig-zag closure at a fixed depth.
#[derive(Clone, Debug)]
pub struct ZigzagRun {
    pub depth: usize,
    /// The closure completed: every word of length `depth` reduces to a
    /// shorter class and all relations trace consistently. The result is
    /// then exact.
    pub converged: bool,
    /// Live classes at depth `depth - 1` and `depth` (`None` when the
    /// state budget ran out).
    pub previous_classes: Option<usize>,
    pub classes: Option<usize>,
    pub result: Option<LocalizationResult>,
}

struct Alphabet {
    letters: Vec<enumerate::Letter>,
    meaning: Vec<Letter>,
    relations: Vec<Relation>,
}

fn alphabet(w: &Marking) -> Alphabet {
    let c = w.host();
    let mut letters = Vec::new();
    let mut meaning = Vec::new();
    let mut forward = vec![usize::MAX; c.num_morphisms()];
    for m in c.morphisms().filter(|&m| !c.is_identity(m)) {
        forward[m] = letters.len();
        letters.push(enumerate::Letter { name: c.morphism_name(m).to_string(), src: c.src(m), tgt: c.tgt(m) });
        meaning.push(Letter::Forward(m));
    }
    let mut relations = Vec::new();
    for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
        for g in c.morphisms().filter(|&g| !c.is_identity(g) && c.src(g) == c.tgt(f)) {
            let gf = c.compose(g, f);
            let rhs = if c.is_identity(gf) { vec![] } else { vec![forward[gf]] };
            relations.push(Relation { src: c.src(f), lhs: vec![forward[f], forward[g]], rhs });
        }
    }
    for s in w.members().filter(|&s| !c.is_identity(s)) {
        let inv = letters.len();
        letters.push(enumerate::Letter { name: format!("{}^-1", c.morphism_name(s)), src: c.tgt(s), tgt: c.src(s) });
        meaning.push(Letter::Inverse(s));
        relations.push(Relation { src: c.src(s), lhs: vec![forward[s], inv], rhs: vec![] });
        relations.push(Relation { src: c.tgt(s), lhs: vec![inv, forward[s]], rhs: vec![] });
    }
    Alphabet { letters, meaning, relations }
}

fn run(w: &Marking, a: &Alphabet, depth: usize) -> Outcome {
    let limits = Limits { max_states: MAX_STATES, max_word_len: Some(depth) };
    enumerate::enumerate(w.host().object_names(), &a.letters, &a.relations, limits)
}

fn class_count(o: &Outcome) -> Option<usize> {
    match o {
        Outcome::Complete(q) => Some(q.category.num_morphisms()),
        Outcome::Blocked { classes } => Some(*classes),
        Outcome::OverBudget => None,
    }
}

pub fn localize_zigzag(w: &Marking, depth: usize) -> ZigzagRun {
    let depth = depth.max(1);
    let c = w.host();
    let a = alphabet(w);
    let previous_classes = class_count(&run(w, &a, depth - 1));
    let outcome = run(w, &a, depth);
    let classes = class_count(&outcome);
    let result = match outcome {
        Outcome::Complete(q) => {
            let localized = Arc::new(q.category);
            let mut forward = vec![usize::MAX; c.num_morphisms()];
            for (l, m) in a.meaning.iter().enumerate() {
                if let Letter::Forward(m) = *m {
                    forward[m] = q.letters[l];
                }
            }
            let mor_map: Vec<Mor> = c
                .morphisms()
                .map(|m| if c.is_identity(m) { localized.identity(c.src(m)) } else { forward[m] })
                .collect();
            let q_functor = FunctorData::new(c.clone(), localized.clone(), c.objects().collect(), mor_map)
                .expect("relations include the composition table");
            let certificates = q
                .classes
                .iter()
                .map(|(_, word)| Certificate::Word(word.iter().map(|&l| a.meaning[l]).collect()))
                .collect();
            Some(LocalizationResult::new(w.clone(), localized, q_functor, Method::Zigzag { depth }, certificates))
        }
        _ => None,
    };
    ZigzagRun { depth, converged: result.is_some(), previous_classes, classes, result }
}
