use std::collections::{BTreeSet, HashMap};

/// Number of codes LZW emits for `text`. The alphabet is the set of
/// distinct characters of the text; every new phrase gets the next code.
pub fn lzw_code_count(text: &str) -> usize {
    let chars: Vec<char> = text.chars().collect();
    if chars.is_empty() {
        return 0;
    }
    let alphabet: BTreeSet<char> = chars.iter().copied().collect();
    let mut dict: HashMap<Vec<char>, usize> = alphabet
        .into_iter()
        .enumerate()
        .map(|(i, c)| (vec![c], i))
        .collect();
    let mut codes = 0;
    let mut phrase: Vec<char> = Vec::new();
    for &c in &chars {
        phrase.push(c);
        if !dict.contains_key(&phrase) {
            let next = dict.len();
            dict.insert(phrase.clone(), next);
            codes += 1;
            phrase.clear();
            phrase.push(c);
        }
    }
    codes + 1
}

/// Characters per emitted LZW code; 1.0 for the empty string.
pub fn lzw_ratio(text: &str) -> f64 {
    let codes = lzw_code_count(text);
    if codes == 0 {
        1.0
    } else {
        text.chars().count() as f64 / codes as f64
    }
}
