//! Pairwise reference for the sliding-window extraction and the checks
//! tying the Before, After and Full graphs together.

use std::collections::BTreeMap;

use convabuse::convgraph::{extract_graph, Graph, Mode, WindowParams};
use convabuse::corpus::{ContextSlice, Label, Message};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn messages(authors: &[String]) -> Vec<Message> {
    authors
        .iter()
        .enumerate()
        .map(|(i, a)| Message {
            message_id: format!("m{i}"),
            thread_id: "t".into(),
            author_id: a.clone(),
            timestamp: i as i64,
            text: String::new(),
            label: Label::Unlabeled,
        })
        .collect()
}

pub fn context(msgs: &[Message], target: usize) -> ContextSlice<'_> {
    ContextSlice {
        messages: msgs,
        target_index: target,
        before_count: target,
        after_count: msgs.len() - target - 1,
    }
}

type Weights = BTreeMap<(String, String), f64>;

/// Every ordered pair of positions `j < i` in `lo..=hi` closer than `len`
/// adds `(len - (i - j)) / (len - 1)` to the edge from author `i` to author
/// `j`, unless they are the same author.
pub fn pair_weights(authors: &[String], lo: usize, hi: usize, len: usize) -> Weights {
    let mut w = Weights::new();
    for i in lo..=hi {
        for j in lo..i {
            let d = i - j;
            if d < len && authors[i] != authors[j] {
                *w.entry((authors[i].clone(), authors[j].clone())).or_default() +=
                    (len - d) as f64 / (len - 1) as f64;
            }
        }
    }
    w
}

fn first_appearance(authors: &[String]) -> Vec<String> {
    let mut seen = Vec::new();
    for a in authors {
        if !seen.contains(a) {
            seen.push(a.clone());
        }
    }
    seen
}

fn weights_of(g: &Graph<f64>) -> Weights {
    g.edges()
        .iter()
        .map(|e| ((g.authors()[e.source].clone(), g.authors()[e.target].clone()), e.weight))
        .collect()
}

fn same(a: &Weights, b: &Weights) -> bool {
    a.len() == b.len() && a.iter().all(|(k, x)| b.get(k).is_some_and(|y| (x - y).abs() < 1e-12))
}

/// Checks one context against the reference and the relations between the
/// three modes.
pub fn check_context(authors: &[String], target: usize, len: usize) -> Result<(), String> {
    let msgs = messages(authors);
    let ctx = context(&msgs, target);
    let last = authors.len() - 1;
    let extract = |mode| -> Result<Graph<f64>, String> {
        extract_graph(&ctx, WindowParams::new(len, mode).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    };
    let (before, after, full) = (extract(Mode::Before)?, extract(Mode::After)?, extract(Mode::Full)?);
    for (g, lo, hi) in [(&before, 0, target), (&after, target, last), (&full, 0, last)] {
        let mode = g.mode();
        if g.authors() != first_appearance(&authors[lo..=hi]) {
            return Err(format!("{mode:?}: vertices {:?}", g.authors()));
        }
        if !same(&weights_of(g), &pair_weights(authors, lo, hi, len)) {
            return Err(format!("{mode:?}: edges {:?}", weights_of(g)));
        }
        if g.targeted_author() != authors[target] || g.target_vertex().is_none() {
            return Err(format!("{mode:?}: targeted author missing"));
        }
    }
    // No window pair lies in both halves, so Full is Before plus After plus
    // the pairs straddling the target.
    let mut sum = weights_of(&before);
    for (k, v) in weights_of(&after) {
        *sum.entry(k).or_default() += v;
    }
    for i in target + 1..=last {
        for j in i.saturating_sub(len - 1)..target {
            if authors[i] != authors[j] {
                *sum.entry((authors[i].clone(), authors[j].clone())).or_default() +=
                    (len - (i - j)) as f64 / (len - 1) as f64;
            }
        }
    }
    if !same(&sum, &weights_of(&full)) {
        return Err("Full differs from Before + After + straddling pairs".into());
    }
    let mut union = before.authors().to_vec();
    for a in after.authors() {
        if !union.contains(a) {
            union.push(a.clone());
        }
    }
    union.sort();
    let mut vf = full.authors().to_vec();
    vf.sort();
    if union != vf {
        return Err("Full vertices are not the union of Before and After".into());
    }
    Ok(())
}

/// `count` seeded contexts of 1 to 60 messages by up to 8 authors, with
/// windows of 2 to 12.
pub fn check_random_contexts(count: u64) -> Result<(), String> {
    for seed in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=60);
        let k = rng.random_range(1..=8);
        let authors: Vec<String> = (0..n).map(|_| format!("u{}", rng.random_range(0..k))).collect();
        let target = rng.random_range(0..n);
        let len = rng.random_range(2..=12);
        check_context(&authors, target, len).map_err(|e| format!("context {seed}: {e}"))?;
    }
    Ok(())
}

/// The four-message hand trace with a window of 3.
pub fn check_hand_trace() -> Result<(), String> {
    let authors: Vec<String> = ["A", "B", "A", "C"].iter().map(|s| s.to_string()).collect();
    let msgs = messages(&authors);
    let g: Graph<f64> = extract_graph(&context(&msgs, 3), WindowParams::new(3, Mode::Full).unwrap())
        .map_err(|e| e.to_string())?;
    let want: Weights = [("B", "A", 1.0), ("A", "B", 1.0), ("C", "A", 1.0), ("C", "B", 0.5)]
        .iter()
        .map(|&(s, t, w)| ((s.to_string(), t.to_string()), w))
        .collect();
    if weights_of(&g) != want {
        return Err(format!("edges {:?}", weights_of(&g)));
    }
    Ok(())
}
