//! Small named categories and random generators used by tests, the CLI
//! search commands and benchmarks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::category::{chain, FinCat, MorphismInfo};
use crate::functor::{all_functors, FunctorData};

/// Index of `u: 0 → 1` in [`arrow`].
pub const ARROW_U: usize = 1;

/// The terminal category `T`.
pub fn terminal() -> FinCat {
    chain(0).renamed(vec!["*".into()], vec!["id_*".into()])
}

/// The walking arrow `[1]` with `u: 0 → 1`.
pub fn arrow() -> FinCat {
    chain(1).renamed(vec!["0".into(), "1".into()], vec!["id_0".into(), "u".into(), "id_1".into()])
}

/// `n` objects and only identities.
pub fn discrete(n: usize) -> FinCat {
    let objects = (0..n).map(|i| format!("d{i}")).collect();
    let morphisms = (0..n).map(|i| MorphismInfo { name: format!("id_d{i}"), src: i, tgt: i }).collect();
    FinCat::from_fn(objects, morphisms, (0..n).collect(), |g, _| g)
}

/// The indiscrete groupoid on `n` objects: one morphism between any two.
pub fn indiscrete(n: usize) -> FinCat {
    let objects = (0..n).map(|i| format!("i{i}")).collect();
    let mut morphisms = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let name = if a == b { format!("id_i{a}") } else { format!("i{a}>i{b}") };
            morphisms.push(MorphismInfo { name, src: a, tgt: b });
        }
    }
    let ids = (0..n).map(|a| a * n + a).collect();
    let info = morphisms.clone();
    FinCat::from_fn(objects, morphisms, ids, |g, f| info[f].src * n + info[g].tgt)
}

/// One object with elements `id, e` and `e ∘ e = e`.
pub fn idempotent() -> FinCat {
    monoid("x", &["id_x", "e"], |a, b| a.max(b))
}

/// The cyclic group of order `n` as a one-object category.
pub fn cyclic(n: usize) -> FinCat {
    let names: Vec<String> = (0..n).map(|k| if k == 0 { "id_x".into() } else { format!("r{k}") }).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    monoid("x", &refs, |a, b| (a + b) % n)
}

/// One-object category from a monoid table on `0..names.len()` with unit 0.
pub fn monoid(object: &str, names: &[&str], op: impl Fn(usize, usize) -> usize) -> FinCat {
    let morphisms = names.iter().map(|n| MorphismInfo { name: n.to_string(), src: 0, tgt: 0 }).collect();
    FinCat::try_from_fn(vec![object.to_string()], morphisms, vec![0], op).expect("monoid table")
}

/// Finite poset from a relation `le(a, b)` that is already reflexive and
/// transitive. Morphism order: `(a, b)` lexicographic.
pub fn poset(names: &[&str], le: impl Fn(usize, usize) -> bool) -> FinCat {
    let n = names.len();
    let mut morphisms = Vec::new();
    let mut index = vec![vec![usize::MAX; n]; n];
    for a in 0..n {
        for b in 0..n {
            if le(a, b) {
                index[a][b] = morphisms.len();
                let name = if a == b { format!("id_{}", names[a]) } else { format!("{}<{}", names[a], names[b]) };
                morphisms.push(MorphismInfo { name, src: a, tgt: b });
            }
        }
    }
    let ids = (0..n).map(|a| index[a][a]).collect();
    let info = morphisms.clone();
    FinCat::from_fn(names.iter().map(|s| s.to_string()).collect(), morphisms, ids, |g, f| {
        index[info[f].src][info[g].tgt]
    })
}

/// `a → c ← b`.
pub fn cospan() -> FinCat {
    poset(&["a", "b", "c"], |x, y| x == y || y == 2)
}

/// `a ← c → b`.
pub fn span() -> FinCat {
    poset(&["a", "b", "c"], |x, y| x == y || x == 2)
}

/// Two parallel arrows `s, t: x → y`.
pub fn parallel_pair() -> FinCat {
    let morphisms = vec![
        MorphismInfo { name: "id_x".into(), src: 0, tgt: 0 },
        MorphismInfo { name: "id_y".into(), src: 1, tgt: 1 },
        MorphismInfo { name: "s".into(), src: 0, tgt: 1 },
        MorphismInfo { name: "t".into(), src: 0, tgt: 1 },
    ];
    let info = morphisms.clone();
    FinCat::from_fn(vec!["x".into(), "y".into()], morphisms, vec![0, 1], |g, f| {
        if info[g].src == info[g].tgt {
            f
        } else {
            g
        }
    })
}

/// Random poset on `n` points: a random DAG closed transitively.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64) -> FinCat {
    let mut le = vec![vec![false; n]; n];
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    for a in 0..n {
        le[a][a] = true;
        for b in 0..n {
            if perm[a] < perm[b] && rng.gen_bool(density) {
                le[a][b] = true;
            }
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if le[a][k] && le[k][b] {
                    le[a][b] = true;
                }
            }
        }
    }
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    poset(&refs, |a, b| le[a][b])
}

/// A small pool of categories with at most `max_morphisms` morphisms.
pub fn small_pool(max_morphisms: usize) -> Vec<FinCat> {
    let mut pool = vec![
        terminal(),
        arrow(),
        discrete(2),
        indiscrete(2),
        idempotent(),
        cyclic(2),
        cyclic(3),
        parallel_pair(),
        cospan(),
        span(),
        chain(2),
        crate::category::product_with_chain(&arrow(), 1),
        chain(3),
        indiscrete(3),
        monoid("x", &["id_x", "a", "b"], |p, q| if q == 0 { p } else { q }),
    ];
    pool.retain(|c| c.num_morphisms() <= max_morphisms);
    pool
}

/// A random category with at most `max_morphisms` morphisms: either a pool
/// member or a random poset.
pub fn random_category(rng: &mut impl Rng, max_morphisms: usize) -> FinCat {
    loop {
        let c = if rng.gen_bool(0.5) {
            let pool = small_pool(max_morphisms);
            pool[rng.gen_range(0..pool.len())].clone()
        } else {
            let n = rng.gen_range(1..=4);
            random_poset(rng, n, 0.5)
        };
        if c.num_morphisms() <= max_morphisms {
            return c;
        }
    }
}

/// A uniformly chosen functor `source → target`, if any exists.
pub fn random_functor(rng: &mut impl Rng, source: &Arc<FinCat>, target: &Arc<FinCat>) -> Option<FunctorData> {
    let all = all_functors(source, target);
    all.choose(rng).cloned()
}
