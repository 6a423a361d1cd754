mod common;

use common::{random_word, NaiveTable, W};
use laver_core::laver::TableCache;
use laver_core::limit::{
    eval_level, eval_profile, freeness_probe, herringbone_probe, signature, SignatureResult, DEFAULT_CAP,
};
use laver_core::term::{parse_term, Term};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cache() -> &'static TableCache {
    static CACHE: std::sync::OnceLock<TableCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(TableCache::default)
}

fn oracles() -> &'static [NaiveTable] {
    static T: std::sync::OnceLock<Vec<NaiveTable>> = std::sync::OnceLock::new();
    T.get_or_init(|| (0..=9).map(NaiveTable::new).collect())
}

#[test]
fn probe_examples() {
    let c = cache();
    assert_eq!(freeness_probe(1, 12, c).unwrap(), SignatureResult::Known(2));
    assert_eq!(freeness_probe(2, 12, c).unwrap(), SignatureResult::Known(3));
    assert_eq!(freeness_probe(4, 12, c).unwrap(), SignatureResult::Known(5));
    assert_eq!(freeness_probe(4, 8, c).unwrap(), SignatureResult::Known(5));
    assert_eq!(freeness_probe(16, 12, c).unwrap(), SignatureResult::Undecided(12));
    let s: Vec<_> = (0..=4).map(|k| herringbone_probe(k, DEFAULT_CAP, c).unwrap()).collect();
    assert_eq!(
        s,
        vec![
            SignatureResult::Known(0),
            SignatureResult::Known(1),
            SignatureResult::Known(2),
            SignatureResult::Known(4),
            SignatureResult::Undecided(12),
        ]
    );
}

#[test]
fn freeness_probe_matches_direct_evaluation() {
    for k in 1..=20u32 {
        let direct = oracles().iter().find(|t| t.n >= 1 && one_times(t, k) != 0).map(|t| t.n);
        let probe = freeness_probe(k as u128, 9, cache()).unwrap();
        match direct {
            Some(n) => assert_eq!(probe, SignatureResult::Known(n), "k = {k}"),
            None => assert_eq!(probe, SignatureResult::Undecided(9), "k = {k}"),
        }
    }
}

/// `[1·k]_n`, where the integer word `k` has value `k mod 2^n`.
fn one_times(t: &NaiveTable, k: u32) -> u32 {
    t.star(1 % t.size(), k % t.size())
}

#[test]
fn integer_words_evaluate_to_themselves() {
    for k in 1..40u64 {
        let w = Term::integer_word(k).unwrap();
        for t in oracles() {
            assert_eq!(eval_level(&w, t.n, cache()).unwrap(), (k % t.size() as u64) as u32);
        }
    }
}

#[test]
fn profile_csv_shape() {
    let p = eval_profile(&parse_term("1*1").unwrap(), 3, cache()).unwrap();
    assert_eq!(p.to_csv(), "n,value\n0,0\n1,0\n2,2\n3,2\n");
}

#[test]
fn words_with_zero_have_no_signature() {
    assert!(signature(&parse_term("1*0").unwrap(), 12, cache()).is_err());
}

#[test]
fn right_factor_can_be_replaced_by_power_of_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let c = cache();
    let mut tested = 0;
    while tested < 100 {
        let a = random_word(&mut rng, 6).to_term();
        let b = random_word(&mut rng, 6).to_term();
        let SignatureResult::Known(sb) = signature(&b, 12, c).unwrap() else {
            continue;
        };
        let Some(pow) = Term::integer_word(1 << sb) else {
            continue;
        };
        let ab = Term::apply(&a, &b);
        let apow = Term::apply(&a, &pow);
        for n in 0..=12 {
            assert_eq!(
                eval_level(&ab, n, c).unwrap() == 0,
                eval_level(&apow, n, c).unwrap() == 0
            );
        }
        if let (SignatureResult::Known(x), SignatureResult::Known(y)) =
            (signature(&ab, 12, c).unwrap(), signature(&apow, 12, c).unwrap())
        {
            assert_eq!(x, y);
        }
        tested += 1;
    }
}

proptest! {
    #[test]
    fn level_values_match_oracle(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: W = random_word(&mut rng, 10);
        for t in oracles() {
            prop_assert_eq!(eval_level(&w.to_term(), t.n, cache()).unwrap(), w.eval(t));
        }
    }

    #[test]
    fn profiles_are_coherent(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 10).to_term();
        let p = eval_profile(&w, 12, cache()).unwrap();
        for n in 1..p.values.len() {
            let m = 1u32 << (n - 1);
            prop_assert_eq!(p.values[n] % m.max(1), p.values[n - 1] % m.max(1));
        }
    }

    #[test]
    fn signature_is_last_zero_level(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 8).to_term();
        if let SignatureResult::Known(s) = signature(&w, 12, cache()).unwrap() {
            prop_assert_eq!(eval_level(&w, s, cache()).unwrap(), 0);
            prop_assert!(eval_level(&w, s + 1, cache()).unwrap() != 0);
            for n in s + 1..=12 {
                prop_assert!(eval_level(&w, n, cache()).unwrap() != 0);
            }
        }
    }
}
