//! Content features of a single message: character statistics, elongation,
//! compressibility, bad words, per-class tf-idf and a naive Bayes score.

mod charclass;
mod features;
mod lexicon;
mod lzw;
mod text;
mod tfidf;

pub use charclass::{char_class_profile, CharClass, CharProfile};
pub use features::{
    content_feature_vector, content_manifest, TextModels, TextSample, CONTENT_FEATURE_COUNT,
    CONTENT_FEATURE_NAMES, STATIC_FEATURE_COUNT,
};
pub use lexicon::{badword_count, BadWordLexicon};
pub use lzw::{lzw_code_count, lzw_ratio};
pub use text::{collapse, normalize_tokenize, word_stats};
pub use tfidf::{Class, ClassTable, TfIdfModel};
