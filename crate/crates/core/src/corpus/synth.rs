use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Corpus, Label, Message};
use crate::error::{Error, Result};

/// Lexicon planted into synthetic abusive messages.
pub const SYNTH_LEXICON: &[&str] = &[
    "idiot",
    "moron",
    "loser",
    "stupid",
    "dumb",
    "jerk",
    "scum",
    "trash",
    "noob",
    "clown",
    "fool",
    "pathetic",
    "worthless",
    "creep",
    "rat",
    "🖕",
];

const NEUTRAL: &[&str] = &[
    "fleet",
    "planet",
    "trade",
    "alliance",
    "mine",
    "base",
    "ship",
    "cargo",
    "metal",
    "crystal",
    "fuel",
    "colony",
    "orbit",
    "sector",
    "scan",
    "probe",
    "market",
    "price",
    "offer",
    "deal",
    "tonight",
    "tomorrow",
    "morning",
    "later",
    "soon",
    "now",
    "again",
    "maybe",
    "sure",
    "okay",
    "thanks",
    "hello",
    "welcome",
    "friend",
    "team",
    "guild",
    "chat",
    "help",
    "question",
    "answer",
    "build",
    "research",
    "shield",
    "engine",
    "laser",
    "defense",
    "storage",
    "upgrade",
    "level",
    "points",
    "rank",
    "score",
    "server",
    "update",
    "patch",
    "event",
    "mission",
    "quest",
    "reward",
    "route",
    "jump",
    "gate",
    "moon",
    "star",
    "galaxy",
    "system",
    "coordinates",
    "send",
    "need",
    "have",
    "want",
    "give",
    "take",
    "check",
    "look",
    "wait",
    "join",
    "leave",
    "meet",
    "play",
    "game",
    "good",
    "nice",
    "great",
    "fine",
    "cool",
    "fast",
    "slow",
    "big",
    "small",
    "new",
    "old",
    "first",
    "last",
    "next",
    "the",
    "a",
    "to",
    "of",
    "and",
    "in",
    "on",
    "for",
    "with",
    "my",
    "your",
    "our",
    "we",
    "you",
    "i",
    "it",
    "is",
    "are",
    "was",
    "will",
    "can",
    "do",
    "not",
    "what",
    "when",
    "where",
    "who",
    "how",
    "why",
    "yes",
    "no",
];

/// Parameters of the synthetic corpus generator.
///
/// Abuse-labeled messages carry content signals (lexicon words, capitals,
/// letter elongation) and a structural signal: `pile_on_size` distinct
/// authors reply right after the abusive message. Benign messages may carry
/// decoys of either kind with probability `decoy_rate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub n_threads: usize,
    pub authors_per_thread: usize,
    pub messages_per_thread: usize,
    /// Fraction of all messages that are abusive; the count is rounded to
    /// the nearest integer.
    pub abuse_rate: f64,
    pub pile_on_size: usize,
    pub badword_injection_rate: f64,
    pub caps_rate: f64,
    /// Probability that a benign message carries a lexicon word, is shouted,
    /// or triggers a reply burst shaped like a pile-on (each independently).
    pub decoy_rate: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            n_threads: 400,
            authors_per_thread: 12,
            messages_per_thread: 60,
            abuse_rate: 655.0 / 24_000.0,
            pile_on_size: 4,
            badword_injection_rate: 0.6,
            caps_rate: 0.35,
            decoy_rate: 0.05,
            seed: 42,
        }
    }
}

impl SynthParams {
    fn event_len(&self) -> usize {
        self.pile_on_size + 1
    }

    /// Number of abusive messages the generator will plant.
    pub fn abuse_count(&self) -> usize {
        (self.abuse_rate * (self.n_threads * self.messages_per_thread) as f64).round() as usize
    }

    fn thread_capacity(&self) -> usize {
        self.messages_per_thread / self.event_len()
    }

    pub fn validate(&self) -> Result<()> {
        let rate = |name: &str, r: f64| {
            if (0.0..=1.0).contains(&r) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in [0, 1], got {r}")))
            }
        };
        rate("abuse_rate", self.abuse_rate)?;
        rate("badword_injection_rate", self.badword_injection_rate)?;
        rate("caps_rate", self.caps_rate)?;
        rate("decoy_rate", self.decoy_rate)?;
        if self.n_threads == 0 || self.messages_per_thread == 0 || self.authors_per_thread == 0 {
            return Err(Error::Config(
                "n_threads, authors_per_thread and messages_per_thread must be positive".into(),
            ));
        }
        if self.authors_per_thread < 2 || self.pile_on_size >= self.authors_per_thread {
            return Err(Error::Config(format!(
                "need at least 2 authors per thread and more authors than pile_on_size \
                 ({} authors, pile_on_size {})",
                self.authors_per_thread, self.pile_on_size
            )));
        }
        let capacity = self.thread_capacity() * self.n_threads;
        if self.abuse_count() > capacity {
            return Err(Error::Config(format!(
                "abuse_rate {} asks for {} abusive messages but at most {} fit with pile_on_size {}",
                self.abuse_rate,
                self.abuse_count(),
                capacity,
                self.pile_on_size
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Normal,
    Abuse,
    Burst,
    Reply,
}

/// Generates a corpus that is a pure function of `params`.
pub fn generate_synthetic(params: &SynthParams) -> Result<Corpus> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut per_thread = vec![0usize; params.n_threads];
    let capacity = params.thread_capacity();
    let mut open: Vec<usize> = (0..params.n_threads).filter(|_| capacity > 0).collect();
    for _ in 0..params.abuse_count() {
        let k = rng.random_range(0..open.len());
        let t = open[k];
        per_thread[t] += 1;
        if per_thread[t] == capacity {
            open.swap_remove(k);
        }
    }

    let mut messages = Vec::with_capacity(params.n_threads * params.messages_per_thread);
    for (t, &n_abuse) in per_thread.iter().enumerate() {
        generate_thread(params, t, n_abuse, &mut rng, &mut messages);
    }
    Corpus::from_messages(messages)
}

fn generate_thread(
    params: &SynthParams,
    thread: usize,
    n_abuse: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Message>,
) {
    let len = params.messages_per_thread;
    let event = params.event_len();
    let mut slots = vec![Slot::Normal; len];

    // Non-overlapping abuse events, uniform over placements.
    let free = len - n_abuse * event + n_abuse;
    let mut starts = rand::seq::index::sample(rng, free, n_abuse).into_vec();
    starts.sort_unstable();
    for (i, s) in starts.iter().enumerate() {
        let at = s + i * (event - 1);
        slots[at] = Slot::Abuse;
        for r in &mut slots[at + 1..at + event] {
            *r = Slot::Reply;
        }
    }
    let mut p = 0;
    while p + event <= len {
        if slots[p..p + event].iter().all(|&s| s == Slot::Normal)
            && rng.random_bool(params.decoy_rate)
        {
            slots[p] = Slot::Burst;
            for r in &mut slots[p + 1..p + event] {
                *r = Slot::Reply;
            }
            p += event;
        } else {
            p += 1;
        }
    }

    let authors: Vec<String> = (0..params.authors_per_thread)
        .map(|a| format!("t{thread:04}u{a:03}"))
        .collect();
    let mut timestamp = 1_600_000_000_000i64 + thread as i64 * 86_400_000;
    let mut history: Vec<usize> = Vec::with_capacity(len);
    let mut repliers: Vec<usize> = Vec::new();
    let mut addressee = 0usize;

    for (pos, &slot) in slots.iter().enumerate() {
        let prev = history.last().copied();
        let author = match slot {
            Slot::Reply => repliers.pop().expect("reply slots follow an event"),
            _ => {
                // Dialog: answer the author two messages back half of the time.
                let back = history.len().checked_sub(2).map(|i| history[i]);
                match back {
                    Some(b) if Some(b) != prev && rng.random_bool(0.5) => b,
                    _ => pick_other(rng, params.authors_per_thread, prev),
                }
            }
        };
        if matches!(slot, Slot::Abuse | Slot::Burst) {
            let mut pool: Vec<usize> = (0..params.authors_per_thread)
                .filter(|&a| a != author)
                .collect();
            pool.shuffle(rng);
            repliers = pool[..params.pile_on_size].to_vec();
            addressee = author;
        }

        let text = match slot {
            Slot::Abuse => abusive_text(params, rng),
            Slot::Reply => format!("@{} {}", authors[addressee], neutral_words(rng, 2, 6)),
            Slot::Normal | Slot::Burst => benign_text(params, rng),
        };
        timestamp += rng.random_range(1_000..120_000);
        out.push(Message {
            message_id: format!("t{thread:04}m{pos:05}"),
            thread_id: format!("t{thread:04}"),
            author_id: authors[author].clone(),
            timestamp,
            text,
            label: if slot == Slot::Abuse {
                Label::Abuse
            } else {
                Label::NonAbuse
            },
        });
        history.push(author);
    }
}

fn pick_other(rng: &mut ChaCha8Rng, n: usize, prev: Option<usize>) -> usize {
    loop {
        let a = rng.random_range(0..n);
        if Some(a) != prev {
            return a;
        }
    }
}

fn neutral_words(rng: &mut ChaCha8Rng, min: usize, max: usize) -> String {
    let n = rng.random_range(min..=max);
    (0..n)
        .map(|_| *NEUTRAL.choose(rng).expect("non-empty vocabulary"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn elongate(word: &str, rng: &mut ChaCha8Rng) -> String {
    let chars: Vec<char> = word.chars().collect();
    let Some(pos) = chars.iter().rposition(|c| "aeiou".contains(*c)) else {
        return word.to_string();
    };
    let extra = rng.random_range(3..=6);
    let mut s: String = chars[..=pos].iter().collect();
    s.extend(std::iter::repeat_n(chars[pos], extra));
    s.extend(&chars[pos + 1..]);
    s
}

fn abusive_text(params: &SynthParams, rng: &mut ChaCha8Rng) -> String {
    let mut words: Vec<String> = neutral_words(rng, 2, 8)
        .split(' ')
        .map(str::to_string)
        .collect();
    if rng.random_bool(params.badword_injection_rate) {
        for _ in 0..rng.random_range(1..=2) {
            let bad = *SYNTH_LEXICON.choose(rng).expect("non-empty lexicon");
            let bad = if rng.random_bool(0.3) {
                elongate(bad, rng)
            } else {
                bad.to_string()
            };
            let at = rng.random_range(0..=words.len());
            words.insert(at, bad);
        }
    }
    let mut text = words.join(" ");
    if rng.random_bool(params.caps_rate) {
        text = text.to_uppercase() + "!!!";
    }
    text
}

fn benign_text(params: &SynthParams, rng: &mut ChaCha8Rng) -> String {
    let mut text = neutral_words(rng, 3, 12);
    if rng.random_bool(0.15) {
        text.push_str(&format!(" {}", rng.random_range(1..1000)));
    }
    if rng.random_bool(params.decoy_rate) {
        let bad = *SYNTH_LEXICON.choose(rng).expect("non-empty lexicon");
        text.push(' ');
        text.push_str(bad);
    }
    if rng.random_bool(params.decoy_rate) {
        text = text.to_uppercase();
    }
    match rng.random_range(0..4) {
        0 => text.push('?'),
        1 => text.push('.'),
        _ => {}
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SynthParams {
        SynthParams {
            n_threads: 6,
            authors_per_thread: 8,
            messages_per_thread: 40,
            abuse_rate: 0.05,
            pile_on_size: 5,
            seed: 42,
            ..Default::default()
        }
    }

    #[test]
    fn deterministic_and_byte_identical() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        generate_synthetic(&small())
            .unwrap()
            .write_jsonl(&mut a)
            .unwrap();
        generate_synthetic(&small())
            .unwrap()
            .write_jsonl(&mut b)
            .unwrap();
        assert_eq!(a, b);
        let mut other = small();
        other.seed = 43;
        let mut c = Vec::new();
        generate_synthetic(&other)
            .unwrap()
            .write_jsonl(&mut c)
            .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_abuse_rate() {
        let mut p = small();
        p.abuse_rate = 0.0;
        let corpus = generate_synthetic(&p).unwrap();
        assert_eq!(corpus.len(), 240);
        assert!(corpus.messages().all(|m| m.label == Label::NonAbuse));
    }

    #[test]
    fn exact_abuse_count() {
        let corpus = generate_synthetic(&small()).unwrap();
        assert_eq!(corpus.stats().abuse, 12);
        assert_eq!(SynthParams::default().abuse_count(), 655);
    }

    #[test]
    fn pile_on_follows_abuse() {
        let corpus = generate_synthetic(&small()).unwrap();
        for thread in corpus.threads() {
            for (i, m) in thread.messages.iter().enumerate() {
                if !m.label.is_abuse() {
                    continue;
                }
                let replies = &thread.messages[i + 1..i + 6];
                let distinct: std::collections::HashSet<_> =
                    replies.iter().map(|r| &r.author_id).collect();
                assert_eq!(distinct.len(), 5);
                assert!(!distinct.contains(&m.author_id));
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = small();
        p.caps_rate = 1.5;
        assert!(p.validate().is_err());
        let mut p = small();
        p.pile_on_size = 8;
        assert!(p.validate().is_err());
        let mut p = small();
        p.abuse_rate = 0.9;
        assert!(p.validate().is_err());
    }

    #[test]
    fn elongation_repeats_last_vowel() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = elongate("idiot", &mut rng);
        assert!(e.starts_with("idioo") && e.ends_with('t'), "{e}");
        assert!(e.len() >= 8);
    }
}
