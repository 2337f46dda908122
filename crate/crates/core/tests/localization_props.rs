use std::sync::Arc;

use dercat_core::catalog::{random_category, random_functor, small_pool};
use dercat_core::correspondence::{find_correspondence_iso, grothendieck_cocart};
use dercat_core::functor::{all_functors, find_isomorphism};
use dercat_core::localization::{
    check_right_fractions, count_factorisations, deligne_comparison, deligne_correspondence, fraction_composition_is_independent,
    localize_fractions, localize_zigzag, Letter,
};
use dercat_core::{localize, saturate_marking, FinCat, LocalizationError, LocalizationResult, Marking, Mor};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// At least one non-identity generator when there is one.
fn random_marking(rng: &mut ChaCha8Rng, c: &Arc<FinCat>, p: f64) -> Marking {
    let mut gens: Vec<Mor> = c.morphisms().filter(|_| rng.gen_bool(p)).collect();
    let non_identities: Vec<Mor> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    if !non_identities.is_empty() {
        gens.push(non_identities[rng.gen_range(0..non_identities.len())]);
    }
    saturate_marking(c.clone(), gens)
}

/// Evaluates a zig-zag in the localization `r`.
fn evaluate(r: &LocalizationResult, start: usize, word: &[Letter]) -> Mor {
    let l = r.localized();
    word.iter().fold(l.identity(start), |acc, &letter| match letter {
        Letter::Forward(m) => l.compose(r.q().mor(m), acc),
        Letter::Inverse(s) => l.compose(l.inverse(r.q().mor(s)).unwrap(), acc),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn universal_property(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Arc::new(random_category(&mut rng, 8));
        let w = random_marking(&mut rng, &c, 0.3);
        let r = match localize(&w, 6) {
            Ok(r) => r,
            Err(LocalizationError::NotConverged { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assert!(r.inverts_marking());
        prop_assert!(r.localized().validate().is_ok());
        for x in small_pool(12).into_iter().take(10) {
            let x = Arc::new(x);
            for h in all_functors(&c, &x).into_iter().filter(|h| w.members().all(|s| x.is_iso(h.mor(s)))).take(8) {
                prop_assert_eq!(count_factorisations(&r, &h), 1);
                let ext = r.extend(&h).unwrap();
                let back = r.q().then(&ext).unwrap();
                prop_assert_eq!(back.mor_map(), h.mor_map());
            }
        }
    }

    #[test]
    fn fractions_agree_with_zigzags(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Arc::new(random_category(&mut rng, 10));
        let w = random_marking(&mut rng, &c, 0.3);
        if !check_right_fractions(&w).is_empty() {
            return Ok(());
        }
        let fr = localize_fractions(&w).unwrap();
        prop_assert!(fraction_composition_is_independent(&w));
        let run = localize_zigzag(&w, 6);
        let Some(zz) = run.result else { return Ok(()) };
        prop_assert!(find_isomorphism(fr.localized(), zz.localized()).is_some());
        // identity on objects: the certificates denote the same morphisms
        let l = fr.localized();
        let mut image = vec![None; l.num_morphisms()];
        for m in c.morphisms() {
            image[fr.q().mor(m)] = Some(zz.q().mor(m));
        }
        for m in l.morphisms() {
            let z = evaluate(&zz, l.src(m), &fr.word(m));
            let f = evaluate(&fr, l.src(m), &fr.word(m));
            prop_assert_eq!(f, m);
            if let Some(expected) = image[m] {
                prop_assert_eq!(z, expected);
            }
        }
    }

    #[test]
    fn deligne_with_isos_is_grothendieck(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Arc::new(random_category(&mut rng, 6));
        let d = Arc::new(random_category(&mut rng, 6));
        let Some(f) = random_functor(&mut rng, &c, &d) else { return Ok(()) };
        let del = deligne_correspondence(&f, &Marking::isos(c)).unwrap();
        prop_assert!(find_correspondence_iso(&del.correspondence, &grothendieck_cocart(&f)).is_some());
    }

    #[test]
    fn deligne_comparison_is_fully_faithful(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Arc::new(random_category(&mut rng, 6));
        let d = Arc::new(random_category(&mut rng, 6));
        let Some(f) = random_functor(&mut rng, &c, &d) else { return Ok(()) };
        let w_c = random_marking(&mut rng, &c, 0.4);
        let w_d = random_marking(&mut rng, &d, 0.2);
        if !check_right_fractions(&w_c).is_empty() {
            return Ok(());
        }
        match deligne_comparison(&f, &w_c, &w_d, 6) {
            Ok(cmp) => prop_assert!(cmp.fully_faithful),
            Err(LocalizationError::NotConverged { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
