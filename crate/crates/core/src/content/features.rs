use serde::{Deserialize, Serialize};

use super::charclass::char_class_profile;
use super::lexicon::{badword_count, BadWordLexicon};
use super::lzw::lzw_ratio;
use super::text::{collapse, normalize_tokenize};
use super::tfidf::{Class, TfIdfModel};
use crate::learn::NbModel;

pub const CONTENT_FEATURE_COUNT: usize = 29;

/// Number of features that depend on the message alone (no fitted model).
pub const STATIC_FEATURE_COUNT: usize = 24;

pub const CONTENT_FEATURE_NAMES: [&str; CONTENT_FEATURE_COUNT] = [
    "Length",
    "AvgWordLength",
    "MaxWordLength",
    "UniqueChars",
    "LetterCount",
    "LetterRatio",
    "DigitCount",
    "DigitRatio",
    "PunctuationCount",
    "PunctuationRatio",
    "WhitespaceCount",
    "WhitespaceRatio",
    "SymbolCount",
    "SymbolRatio",
    "OtherCount",
    "OtherRatio",
    "CapitalCount",
    "CapitalRatio",
    "LzwRatio",
    "CollapseDelta",
    "WordCount",
    "UniqueWordCount",
    "BadWordCount",
    "BadWordCountCollapsed",
    "TfIdfAbuse",
    "TfIdfNonAbuse",
    "TfIdfAbuseCollapsed",
    "TfIdfNonAbuseCollapsed",
    "NaiveBayes",
];

pub fn content_manifest() -> Vec<String> {
    CONTENT_FEATURE_NAMES.iter().map(|s| s.to_string()).collect()
}

/// A message reduced to its model-independent features and the token lists
/// the fitted text models consume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TextSample {
    pub statics: Vec<f64>,
    pub tokens: Vec<String>,
    pub collapsed_tokens: Vec<String>,
}

impl TextSample {
    pub fn new(text: &str, lexicon: &BadWordLexicon) -> Self {
        let profile = char_class_profile(text);
        let collapsed = collapse(text);
        let tokens = normalize_tokenize(text);
        let collapsed_tokens = normalize_tokenize(&collapsed);
        let unique: std::collections::BTreeSet<&String> = tokens.iter().collect();

        let mut statics = profile.values().to_vec();
        statics.push(lzw_ratio(text));
        statics.push((profile.length - collapsed.chars().count()) as f64);
        statics.push(tokens.len() as f64);
        statics.push(unique.len() as f64);
        statics.push(badword_count(&tokens, lexicon) as f64);
        statics.push(badword_count(&collapsed_tokens, lexicon) as f64);
        debug_assert_eq!(statics.len(), STATIC_FEATURE_COUNT);
        TextSample {
            statics,
            tokens,
            collapsed_tokens,
        }
    }
}

/// Text models fitted on one training set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TextModels {
    pub tfidf: TfIdfModel,
    pub nb: NbModel,
}

impl TextModels {
    pub fn fit(samples: &[&TextSample], labels: &[bool]) -> crate::Result<Self> {
        let docs: Vec<&[String]> = samples.iter().map(|s| s.tokens.as_slice()).collect();
        Ok(TextModels {
            tfidf: TfIdfModel::fit(&docs, labels)?,
            nb: NbModel::fit(&docs, labels)?,
        })
    }

    pub fn features(&self, sample: &TextSample) -> Vec<f64> {
        let mut v = Vec::with_capacity(CONTENT_FEATURE_COUNT);
        v.extend_from_slice(&sample.statics);
        v.push(self.tfidf.score(&sample.tokens, Class::Abuse));
        v.push(self.tfidf.score(&sample.tokens, Class::NonAbuse));
        v.push(self.tfidf.score(&sample.collapsed_tokens, Class::Abuse));
        v.push(self.tfidf.score(&sample.collapsed_tokens, Class::NonAbuse));
        v.push(self.nb.posterior(&sample.tokens));
        v
    }
}

/// The 29 content features of `text`, in `CONTENT_FEATURE_NAMES` order.
pub fn content_feature_vector(
    text: &str,
    tfidf: &TfIdfModel,
    nb: &NbModel,
    lexicon: &BadWordLexicon,
) -> Vec<f64> {
    let models = TextModels {
        tfidf: tfidf.clone(),
        nb: nb.clone(),
    };
    models.features(&TextSample::new(text, lexicon))
}
