//! Coset-style enumeration of a category presented by generators and
//! relations.
//!
//! For every object `a` we grow a deterministic automaton whose states are
//! classes of paths out of `a` and whose edge `n --l--> m` means
//! `m = l ∘ n`. Relations are scanned from every state and mismatching
//! ends are merged (with the merge propagated along edges). When every
//! state has all its edges and every relation traces consistently, the
//! automaton is exactly the quotient of the free category.

use crate::category::{FinCat, MorphismInfo, Obj};

#[derive(Clone, Debug)]
pub(crate) struct Letter {
    pub name: String,
    pub src: Obj,
    pub tgt: Obj,
}

/// `lhs = rhs`, both paths out of `src`, letters in application order.
#[derive(Clone, Debug)]
pub(crate) struct Relation {
    pub src: Obj,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Limits {
    /// Hard cap on states ever created, over all roots.
    pub max_states: usize,
    /// States whose representative word is this long get no new edges.
    pub max_word_len: Option<usize>,
}

pub(crate) enum Outcome {
    Complete(Quotient),
    /// The word-length cap blocked some edge or relation trace.
    Blocked { classes: usize },
    OverBudget,
}

/// Classes of paths, one list per root object.
pub(crate) struct Quotient {
    /// (root, word) per class, in canonical order.
    pub classes: Vec<(Obj, Vec<usize>)>,
    /// Class of each single-letter path.
    pub letters: Vec<usize>,
    pub category: FinCat,
}

struct State {
    tgt: Obj,
    word: Vec<usize>,
    edges: Vec<Option<usize>>,
}

struct Automaton<'a> {
    letters: &'a [Letter],
    states: Vec<State>,
    parent: Vec<usize>,
    alive: usize,
    changed: bool,
    blocked: bool,
}

fn shortlex_less(a: &[usize], b: &[usize]) -> bool {
    (a.len(), a) < (b.len(), b)
}

impl<'a> Automaton<'a> {
    fn new(letters: &'a [Letter], root: Obj) -> Self {
        let mut a = Automaton { letters, states: Vec::new(), parent: Vec::new(), alive: 0, changed: false, blocked: false };
        a.push(root, Vec::new());
        a
    }

    fn push(&mut self, tgt: Obj, word: Vec<usize>) -> usize {
        let id = self.states.len();
        self.states.push(State { tgt, word, edges: vec![None; self.letters.len()] });
        self.parent.push(id);
        self.alive += 1;
        self.changed = true;
        id
    }

    fn find(&mut self, mut n: usize) -> usize {
        while self.parent[n] != n {
            self.parent[n] = self.parent[self.parent[n]];
            n = self.parent[n];
        }
        n
    }

    fn edge(&mut self, n: usize, l: usize) -> Option<usize> {
        self.states[n].edges[l].map(|t| self.find(t))
    }

    fn define(&mut self, n: usize, l: usize, limits: &Limits) -> Option<usize> {
        if let Some(cap) = limits.max_word_len {
            if self.states[n].word.len() >= cap {
                self.blocked = true;
                return None;
            }
        }
        let mut word = self.states[n].word.clone();
        word.push(l);
        let t = self.push(self.letters[l].tgt, word);
        self.states[n].edges[l] = Some(t);
        Some(t)
    }

    fn trace(&mut self, mut n: usize, word: &[usize], define: Option<&Limits>) -> Option<usize> {
        for &l in word {
            n = self.find(n);
            n = match self.edge(n, l) {
                Some(t) => t,
                None => self.define(n, l, define?)?,
            };
        }
        Some(self.find(n))
    }

    fn coincide(&mut self, a: usize, b: usize) {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, kill) = (a.min(b), a.max(b));
            self.parent[kill] = keep;
            self.alive -= 1;
            self.changed = true;
            if shortlex_less(&self.states[kill].word, &self.states[keep].word) {
                self.states[keep].word = std::mem::take(&mut self.states[kill].word);
            }
            for l in 0..self.letters.len() {
                if let Some(t) = self.states[kill].edges[l].take() {
                    match self.states[keep].edges[l] {
                        None => self.states[keep].edges[l] = Some(t),
                        Some(t2) => queue.push((t, t2)),
                    }
                }
            }
        }
    }
}

/// Runs the enumeration. `created` accumulates over roots for the budget.
pub(crate) fn enumerate(objects: &[String], letters: &[Letter], relations: &[Relation], limits: Limits) -> Outcome {
    let mut automata = Vec::with_capacity(objects.len());
    let mut created = 0usize;
    let mut any_blocked = false;
    for root in 0..objects.len() {
        let mut a = Automaton::new(letters, root);
        loop {
            a.changed = false;
            a.blocked = false;
            let mut i = 0;
            while i < a.states.len() {
                if a.find(i) == i {
                    let tgt = a.states[i].tgt;
                    for rel in relations.iter().filter(|r| r.src == tgt) {
                        let l = a.trace(i, &rel.lhs, Some(&limits));
                        let r = a.trace(i, &rel.rhs, Some(&limits));
                        if let (Some(l), Some(r)) = (l, r) {
                            a.coincide(l, r);
                        }
                        if a.find(i) != i {
                            break;
                        }
                    }
                    if a.find(i) == i {
                        for (l, letter) in letters.iter().enumerate() {
                            if letter.src == tgt && a.edge(i, l).is_none() {
                                a.define(i, l, &limits);
                            }
                        }
                    }
                }
                if created + a.states.len() > limits.max_states {
                    return Outcome::OverBudget;
                }
                i += 1;
            }
            if !a.changed {
                break;
            }
        }
        any_blocked |= a.blocked || !consistent(&mut a, relations);
        created += a.states.len();
        automata.push(a);
    }
    if any_blocked {
        return Outcome::Blocked { classes: automata.iter().map(|a| a.alive).sum() };
    }
    Outcome::Complete(assemble(objects, letters, automata))
}

fn consistent(a: &mut Automaton<'_>, relations: &[Relation]) -> bool {
    for i in 0..a.states.len() {
        if a.find(i) != i {
            continue;
        }
        let tgt = a.states[i].tgt;
        for (l, letter) in a.letters.iter().enumerate() {
            if letter.src == tgt && a.edge(i, l).is_none() {
                return false;
            }
        }
        for rel in relations.iter().filter(|r| r.src == tgt) {
            match (a.trace(i, &rel.lhs, None), a.trace(i, &rel.rhs, None)) {
                (Some(x), Some(y)) if x == y => {}
                _ => return false,
            }
        }
    }
    true
}

fn assemble(objects: &[String], letters: &[Letter], mut automata: Vec<Automaton<'_>>) -> Quotient {
    // (root, state) per class
    let mut classes: Vec<(Obj, usize)> = Vec::new();
    for (root, a) in automata.iter_mut().enumerate() {
        for s in 0..a.states.len() {
            if a.find(s) == s {
                classes.push((root, s));
            }
        }
    }
    classes.sort_by(|&(ra, sa), &(rb, sb)| {
        let wa = &automata[ra].states[sa].word;
        let wb = &automata[rb].states[sb].word;
        (wa.len(), wa, ra).cmp(&(wb.len(), wb, rb))
    });
    let mut index: Vec<Vec<usize>> = automata.iter().map(|a| vec![usize::MAX; a.states.len()]).collect();
    for (i, &(root, s)) in classes.iter().enumerate() {
        index[root][s] = i;
    }
    let morphisms: Vec<MorphismInfo> = classes
        .iter()
        .map(|&(root, s)| {
            let st = &automata[root].states[s];
            let name = if st.word.is_empty() {
                format!("id_{}", objects[root])
            } else {
                st.word.iter().rev().map(|&l| letters[l].name.as_str()).collect::<Vec<_>>().join(".")
            };
            MorphismInfo { name, src: root, tgt: st.tgt }
        })
        .collect();
    let identities: Vec<usize> = (0..objects.len()).map(|root| index[root][automata[root].find(0)]).collect();
    let words: Vec<(Obj, Vec<usize>)> =
        classes.iter().map(|&(root, s)| (root, automata[root].states[s].word.clone())).collect();
    let letter_classes = letters
        .iter()
        .enumerate()
        .map(|(l, letter)| {
            let a = &mut automata[letter.src];
            let root = a.find(0);
            let end = a.trace(root, &[l], None).expect("complete automaton");
            index[letter.src][end]
        })
        .collect();
    let category = FinCat::from_fn(objects.to_vec(), morphisms, identities, |g, f| {
        let (root_f, state_f) = classes[f];
        let a = &mut automata[root_f];
        let end = a.trace(state_f, &words[g].1, None).expect("complete automaton");
        index[root_f][end]
    });
    Quotient { classes: words, letters: letter_classes, category }
}
