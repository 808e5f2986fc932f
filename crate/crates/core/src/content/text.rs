use std::collections::HashSet;

use unicode_general_category::{get_general_category, GeneralCategory};

pub(crate) fn is_punctuation(c: char) -> bool {
    use GeneralCategory::*;
    matches!(
        get_general_category(c),
        ConnectorPunctuation
            | DashPunctuation
            | OpenPunctuation
            | ClosePunctuation
            | InitialPunctuation
            | FinalPunctuation
            | OtherPunctuation
    )
}

/// Lowercases `text`, drops Unicode punctuation and splits on whitespace.
pub fn normalize_tokenize(text: &str) -> Vec<String> {
    let cleaned: String = text
        .chars()
        .filter(|&c| !is_punctuation(c))
        .flat_map(char::to_lowercase)
        .collect();
    cleaned.split_whitespace().map(str::to_owned).collect()
}

/// Shortens every run of three or more identical characters to two.
pub fn collapse(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut prev: Option<char> = None;
    let mut run = 0;
    for c in text.chars() {
        if Some(c) == prev {
            run += 1;
        } else {
            prev = Some(c);
            run = 1;
        }
        if run <= 2 {
            out.push(c);
        }
    }
    out
}

/// `(word count, unique word count)` over the normalized tokens.
pub fn word_stats(text: &str) -> (usize, usize) {
    let tokens = normalize_tokenize(text);
    let unique: HashSet<&String> = tokens.iter().collect();
    (tokens.len(), unique.len())
}
