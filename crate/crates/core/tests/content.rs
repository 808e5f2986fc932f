use convabuse::content::{
    char_class_profile, collapse, content_feature_vector, content_manifest, lzw_code_count, lzw_ratio,
    BadWordLexicon, TfIdfModel, CONTENT_FEATURE_COUNT,
};
use convabuse::learn::NbModel;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Textbook LZW over code points, counting emitted codes.
fn reference_lzw(text: &str) -> usize {
    let chars: Vec<char> = text.chars().collect();
    if chars.is_empty() {
        return 0;
    }
    let mut dict: HashMap<Vec<char>, usize> = HashMap::new();
    let mut codes = 0;
    let mut w: Vec<char> = Vec::new();
    for &c in &chars {
        let mut wc = w.clone();
        wc.push(c);
        if w.is_empty() || wc.len() == 1 || dict.contains_key(&wc) {
            w = wc;
        } else {
            codes += 1;
            let k = dict.len();
            dict.insert(wc, k);
            w = vec![c];
        }
    }
    codes + 1
}

#[test]
fn elongation_collapses_to_two() {
    assert_eq!(collapse("loooooool"), "lool");
    assert_eq!(collapse("noooo!!!!!"), "noo!!");
    assert_eq!(collapse("été"), "été");
}

#[test]
fn lzw_ratio_of_alternating_pair() {
    // Codes: a, b, ab, aba, b.
    assert_eq!(reference_lzw("abababab"), 5);
    assert_eq!(lzw_code_count("abababab"), 5);
    assert_eq!(lzw_ratio("abababab"), 1.6);
}

#[test]
fn feature_vector_width() {
    let docs = vec![vec!["bad".to_string()], vec!["good".to_string()]];
    let labels = [true, false];
    let tfidf = TfIdfModel::fit(&docs, &labels).unwrap();
    let nb = NbModel::fit(&docs, &labels).unwrap();
    let v = content_feature_vector("You BAD bad guy!!", &tfidf, &nb, &BadWordLexicon::new(["bad"]));
    assert_eq!(v.len(), 29);
    assert_eq!(CONTENT_FEATURE_COUNT, 29);
    assert_eq!(content_manifest().len(), 29);
    assert!(v.iter().all(|x| x.is_finite()));
}

fn random_unicode(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(1..40);
    (0..n)
        .map(|_| loop {
            let pick: u32 = match rng.random_range(0..4) {
                0 => rng.random_range(0x20..0x7f),
                1 => rng.random_range(0xa0..0x3000),
                2 => rng.random_range(0..0x20),
                _ => rng.random_range(0..0x11_0000),
            };
            if let Some(c) = char::from_u32(pick) {
                break c;
            }
        })
        .collect()
}

#[test]
fn class_ratios_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let s = random_unicode(&mut rng);
        let sum: f64 = char_class_profile(&s).class_ratios().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12, "{s:?}: {sum}");
    }
}

#[test]
fn empty_text_has_zero_ratios() {
    assert_eq!(char_class_profile("").class_ratios(), [0.0; 6]);
    assert_eq!(lzw_ratio(""), 1.0);
}

proptest! {
    #[test]
    fn collapse_is_idempotent(s in "\\PC{0,40}") {
        let once = collapse(&s);
        prop_assert_eq!(collapse(&once), once.clone());
        prop_assert!(once.chars().count() <= s.chars().count());
    }

    #[test]
    fn lzw_matches_reference(s in "[ab ]{0,60}|\\PC{0,30}") {
        prop_assert_eq!(lzw_code_count(&s), reference_lzw(&s));
    }
}
