use std::sync::Arc;

use dercat_core::catalog::{random_category, random_functor};
use dercat_core::functor::{check_equivalence, dual_functor, find_isomorphism};
use dercat_core::natural::natural_transformations;
use dercat_core::{compile_presentation, saturate_marking, FinCat, FunctorData, Generator, Path, Presentation};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generators are the non-identity morphisms, relations the full
/// composition table.
fn table_presentation(c: &FinCat) -> Presentation {
    let gens: Vec<usize> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    let letter = |m: usize| gens.iter().position(|&g| g == m);
    let generators = gens
        .iter()
        .map(|&m| Generator { name: c.morphism_name(m).to_string(), src: c.src(m), tgt: c.tgt(m) })
        .collect();
    let mut relations = Vec::new();
    for &f in &gens {
        for &g in gens.iter().filter(|&&g| c.src(g) == c.tgt(f)) {
            let gf = c.compose(g, f);
            let rhs = Path { src: c.src(f), letters: letter(gf).into_iter().collect() };
            relations.push((Path { src: c.src(f), letters: vec![letter(f).unwrap(), letter(g).unwrap()] }, rhs));
        }
    }
    Presentation::new(c.object_names().to_vec(), generators, relations).unwrap()
}

/// Natural transformations by enumerating every tuple of components.
fn brute_force_count(f: &FunctorData, g: &FunctorData) -> usize {
    let (c, d) = (f.source(), f.target());
    let choices: Vec<&[usize]> = c.objects().map(|x| d.hom(f.obj(x), g.obj(x))).collect();
    let mut count = 0;
    let mut idx = vec![0usize; choices.len()];
    if choices.iter().any(|h| h.is_empty()) {
        return 0;
    }
    loop {
        let comp: Vec<usize> = idx.iter().zip(&choices).map(|(&i, h)| h[i]).collect();
        let natural = c.morphisms().all(|m| {
            d.compose(g.mor(m), comp[c.src(m)]) == d.compose(comp[c.tgt(m)], f.mor(m))
        });
        count += natural as usize;
        let mut k = 0;
        loop {
            if k == idx.len() {
                return count;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compiled_tables_are_valid_and_order_independent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_category(&mut rng, 10);
        let p = table_presentation(&c);
        let compiled = Arc::new(compile_presentation(&p, 64).unwrap());
        prop_assert!(compiled.validate().is_ok());
        prop_assert!(find_isomorphism(&compiled, &Arc::new(c.clone())).is_some());
        let mut perm: Vec<usize> = (0..p.generators().len()).collect();
        perm.shuffle(&mut rng);
        let shuffled = Arc::new(compile_presentation(&p.permute_generators(&perm), 64).unwrap());
        prop_assert!(find_isomorphism(&compiled, &shuffled).is_some());
    }

    #[test]
    fn saturation_is_idempotent_and_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Arc::new(random_category(&mut rng, 12));
        let small: Vec<usize> = c.morphisms().filter(|_| rng.gen_bool(0.3)).collect();
        let mut large = small.clone();
        large.extend(c.morphisms().filter(|_| rng.gen_bool(0.3)));
        let w = saturate_marking(c.clone(), small.iter().copied());
        let again = saturate_marking(c.clone(), w.members());
        prop_assert_eq!(w.member_set(), again.member_set());
        let bigger = saturate_marking(c.clone(), large);
        prop_assert!(w.member_set().is_subset(&bigger.member_set()));
    }

    #[test]
    fn natural_transformation_count_matches_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Arc::new(random_category(&mut rng, 8));
        let d = Arc::new(random_category(&mut rng, 12));
        if let (Some(f), Some(g)) = (random_functor(&mut rng, &c, &d), random_functor(&mut rng, &c, &d)) {
            prop_assert_eq!(natural_transformations(&f, &g).unwrap().len(), brute_force_count(&f, &g));
        }
    }

    #[test]
    fn equivalence_is_self_dual(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Arc::new(random_category(&mut rng, 8));
        let d = Arc::new(random_category(&mut rng, 8));
        if let Some(f) = random_functor(&mut rng, &c, &d) {
            prop_assert_eq!(check_equivalence(&f).is_some(), check_equivalence(&dual_functor(&f)).is_some());
        }
    }
}
