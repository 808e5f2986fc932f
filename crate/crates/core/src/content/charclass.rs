use std::collections::HashSet;

use unicode_general_category::{get_general_category, GeneralCategory};

use super::text::normalize_tokenize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharClass {
    Letter,
    Digit,
    Punctuation,
    Whitespace,
    Symbol,
    Other,
}

impl CharClass {
    pub const ALL: [CharClass; 6] = [
        CharClass::Letter,
        CharClass::Digit,
        CharClass::Punctuation,
        CharClass::Whitespace,
        CharClass::Symbol,
        CharClass::Other,
    ];

    /// Letters are `L*`, digits `Nd`, punctuation `P*`, symbols `S*`;
    /// separators `Z*` and whitespace control characters are whitespace.
    pub fn of(c: char) -> CharClass {
        use GeneralCategory::*;
        match get_general_category(c) {
            UppercaseLetter | LowercaseLetter | TitlecaseLetter | ModifierLetter | OtherLetter => {
                CharClass::Letter
            }
            DecimalNumber => CharClass::Digit,
            ConnectorPunctuation | DashPunctuation | OpenPunctuation | ClosePunctuation
            | InitialPunctuation | FinalPunctuation | OtherPunctuation => CharClass::Punctuation,
            SpaceSeparator | LineSeparator | ParagraphSeparator => CharClass::Whitespace,
            MathSymbol | CurrencySymbol | ModifierSymbol | OtherSymbol => CharClass::Symbol,
            _ if c.is_whitespace() => CharClass::Whitespace,
            _ => CharClass::Other,
        }
    }
}

/// Character-level statistics of a raw message.
#[derive(Clone, Debug, PartialEq)]
pub struct CharProfile {
    pub length: usize,
    pub avg_word_length: f64,
    pub max_word_length: usize,
    pub unique_chars: usize,
    /// Counts in `CharClass::ALL` order.
    pub class_counts: [usize; 6],
    pub capitals: usize,
}

impl CharProfile {
    fn ratio(&self, count: usize) -> f64 {
        if self.length == 0 {
            0.0
        } else {
            count as f64 / self.length as f64
        }
    }

    pub fn class_ratios(&self) -> [f64; 6] {
        self.class_counts.map(|c| self.ratio(c))
    }

    pub fn capital_ratio(&self) -> f64 {
        self.ratio(self.capitals)
    }

    /// The 18 profile values in feature order: length, average and maximal
    /// word length, unique characters, six (count, ratio) class pairs and
    /// the capital (count, ratio) pair.
    pub fn values(&self) -> [f64; 18] {
        let mut out = [0.0; 18];
        out[0] = self.length as f64;
        out[1] = self.avg_word_length;
        out[2] = self.max_word_length as f64;
        out[3] = self.unique_chars as f64;
        let ratios = self.class_ratios();
        for k in 0..6 {
            out[4 + 2 * k] = self.class_counts[k] as f64;
            out[5 + 2 * k] = ratios[k];
        }
        out[16] = self.capitals as f64;
        out[17] = self.capital_ratio();
        out
    }
}

pub fn char_class_profile(text: &str) -> CharProfile {
    let mut class_counts = [0usize; 6];
    let mut capitals = 0;
    let mut length = 0;
    let mut unique = HashSet::new();
    for c in text.chars() {
        length += 1;
        unique.insert(c);
        let k = CharClass::ALL
            .iter()
            .position(|&x| x == CharClass::of(c))
            .expect("every class is listed");
        class_counts[k] += 1;
        if c.is_uppercase() {
            capitals += 1;
        }
    }
    let words = normalize_tokenize(text);
    let lengths: Vec<usize> = words.iter().map(|w| w.chars().count()).collect();
    CharProfile {
        length,
        avg_word_length: if lengths.is_empty() {
            0.0
        } else {
            lengths.iter().sum::<usize>() as f64 / lengths.len() as f64
        },
        max_word_length: lengths.iter().copied().max().unwrap_or(0),
        unique_chars: unique.len(),
        class_counts,
        capitals,
    }
}
