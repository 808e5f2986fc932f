//! Chat-log corpora: JSONL ingestion, thread contexts around targeted
//! messages, balanced labeled datasets and a seeded synthetic generator.

mod synth;

pub use synth::{generate_synthetic, SynthParams, SYNTH_LEXICON};

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Abuse,
    NonAbuse,
    #[default]
    Unlabeled,
}

impl Label {
    pub fn is_abuse(self) -> bool {
        self == Label::Abuse
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Abuse => "abuse",
            Label::NonAbuse => "non_abuse",
            Label::Unlabeled => "unlabeled",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abuse" => Ok(Label::Abuse),
            "non_abuse" => Ok(Label::NonAbuse),
            "unlabeled" => Ok(Label::Unlabeled),
            other => Err(Error::Input(format!("unknown label {other:?}"))),
        }
    }
}

/// One chat message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub message_id: String,
    pub thread_id: String,
    pub author_id: String,
    /// Epoch milliseconds.
    pub timestamp: i64,
    pub text: String,
    #[serde(default)]
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thread {
    pub id: String,
    /// Sorted by `(timestamp, message_id)`.
    pub messages: Vec<Message>,
}

/// Messages grouped by thread. Threads are ordered by id, messages inside a
/// thread by `(timestamp, message_id)`. Immutable once built.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    threads: Vec<Thread>,
    index: HashMap<String, (usize, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub messages: usize,
    pub threads: usize,
    pub abuse: usize,
    pub non_abuse: usize,
    pub unlabeled: usize,
}

impl Corpus {
    pub fn from_messages(messages: Vec<Message>) -> Result<Self> {
        let mut by_thread: HashMap<String, Vec<Message>> = HashMap::new();
        let mut seen = std::collections::HashSet::with_capacity(messages.len());
        for m in messages {
            if !seen.insert(m.message_id.clone()) {
                return Err(Error::DuplicateId(m.message_id));
            }
            by_thread.entry(m.thread_id.clone()).or_default().push(m);
        }
        let mut threads: Vec<Thread> = by_thread
            .into_iter()
            .map(|(id, mut messages)| {
                messages.sort_by(|a, b| {
                    (a.timestamp, &a.message_id).cmp(&(b.timestamp, &b.message_id))
                });
                Thread { id, messages }
            })
            .collect();
        threads.sort_by(|a, b| a.id.cmp(&b.id));

        let mut index = HashMap::with_capacity(seen.len());
        for (t, thread) in threads.iter().enumerate() {
            for (p, m) in thread.messages.iter().enumerate() {
                index.insert(m.message_id.clone(), (t, p));
            }
        }
        Ok(Corpus { threads, index })
    }

    pub fn threads(&self) -> &[Thread] {
        &self.threads
    }

    /// All messages in corpus order (threads by id, then thread order).
    pub fn messages(&self) -> impl Iterator<Item = &Message> {
        self.threads.iter().flat_map(|t| t.messages.iter())
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn get(&self, message_id: &str) -> Option<&Message> {
        self.index
            .get(message_id)
            .map(|&(t, p)| &self.threads[t].messages[p])
    }

    pub fn stats(&self) -> IngestStats {
        let mut stats = IngestStats {
            messages: self.len(),
            threads: self.threads.len(),
            ..Default::default()
        };
        for m in self.messages() {
            match m.label {
                Label::Abuse => stats.abuse += 1,
                Label::NonAbuse => stats.non_abuse += 1,
                Label::Unlabeled => stats.unlabeled += 1,
            }
        }
        stats
    }

    /// Writes the corpus as JSONL in corpus order.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for m in self.messages() {
            serde_json::to_writer(&mut out, m)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Parses a JSONL corpus. Blank lines are skipped; line numbers are 1-based.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<(Corpus, IngestStats)> {
    let mut messages = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let m: Message = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        messages.push(m);
    }
    let corpus = Corpus::from_messages(messages)?;
    let stats = corpus.stats();
    Ok((corpus, stats))
}

pub fn read_corpus(path: &std::path::Path) -> Result<(Corpus, IngestStats)> {
    let file = std::fs::File::open(path).map_err(|e| Error::file(path, e))?;
    parse_corpus(std::io::BufReader::new(file))
}

/// A contiguous window of one thread around a targeted message.
#[derive(Clone, Copy, Debug)]
pub struct ContextSlice<'a> {
    pub messages: &'a [Message],
    pub target_index: usize,
    pub before_count: usize,
    pub after_count: usize,
}

impl<'a> ContextSlice<'a> {
    pub fn target(&self) -> &'a Message {
        &self.messages[self.target_index]
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }
}

/// Up to `before_count` messages preceding the target, the target, and up to
/// `after_count` following it, all from the target's thread.
pub fn thread_context<'a>(
    corpus: &'a Corpus,
    target_id: &str,
    before_count: usize,
    after_count: usize,
) -> Result<ContextSlice<'a>> {
    let &(t, p) = corpus
        .index
        .get(target_id)
        .ok_or_else(|| Error::NotFound(target_id.to_string()))?;
    let messages = &corpus.threads[t].messages;
    let start = p.saturating_sub(before_count);
    let end = p.saturating_add(after_count).min(messages.len() - 1);
    Ok(ContextSlice {
        messages: &messages[start..=end],
        target_index: p - start,
        before_count,
        after_count,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledItem {
    pub message_id: String,
    pub label: Label,
}

/// Labeled messages, abuse items first (corpus order), then non-abuse items
/// (corpus order).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub items: Vec<LabeledItem>,
}

impl LabeledDataset {
    /// `(abuse, non_abuse)` counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let abuse = self.items.iter().filter(|i| i.label.is_abuse()).count();
        (abuse, self.items.len() - abuse)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Every abuse message plus an equal-size seeded uniform sample of the
/// non-abuse messages.
pub fn build_balanced_dataset(corpus: &Corpus, seed: u64) -> Result<LabeledDataset> {
    let abuse: Vec<&Message> = corpus.messages().filter(|m| m.label.is_abuse()).collect();
    let non_abuse: Vec<&Message> = corpus
        .messages()
        .filter(|m| m.label == Label::NonAbuse)
        .collect();
    if abuse.is_empty() {
        return Err(Error::InsufficientData(
            "corpus has no abuse-labeled messages".into(),
        ));
    }
    if non_abuse.len() < abuse.len() {
        return Err(Error::InsufficientData(format!(
            "{} abuse messages but only {} non-abuse candidates",
            abuse.len(),
            non_abuse.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, non_abuse.len(), abuse.len()).into_vec();
    picked.sort_unstable();

    let item = |m: &Message| LabeledItem {
        message_id: m.message_id.clone(),
        label: m.label,
    };
    let items = abuse
        .iter()
        .map(|m| item(m))
        .chain(picked.iter().map(|&i| item(non_abuse[i])))
        .collect();
    Ok(LabeledDataset { items })
}
