//! Conversational graphs extracted from a context period with a sliding
//! window: the author of the last message in the window is linked to the
//! authors of the other window messages, with weights decaying linearly
//! with the distance between the two messages.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::ContextSlice;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_WINDOW_LEN: usize = 10;

/// Which part of the context period is processed. The targeted message
/// belongs to both the `Before` and the `After` range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Before,
    After,
    Full,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Before, Mode::After, Mode::Full];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Before => "before",
            Mode::After => "after",
            Mode::Full => "full",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "before" => Ok(Mode::Before),
            "after" => Ok(Mode::After),
            "full" => Ok(Mode::Full),
            other => Err(Error::Config(format!("invalid graph mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowParams {
    pub window_len: usize,
    pub mode: Mode,
}

impl WindowParams {
    pub fn new(window_len: usize, mode: Mode) -> Result<Self> {
        if window_len < 2 {
            return Err(Error::Config(format!(
                "window length must be at least 2, got {window_len}"
            )));
        }
        Ok(WindowParams { window_len, mode })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge<T> {
    pub source: usize,
    pub target: usize,
    pub weight: T,
}

/// Directed weighted graph over the authors of a context period.
///
/// Vertices are numbered in order of first appearance in the processed
/// range, so renaming authors never changes the structure. Edges are sorted
/// by `(source, target)`, carry strictly positive weights and never form
/// self-loops.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Graph<T> {
    authors: Vec<String>,
    edges: Vec<Edge<T>>,
    targeted_author: String,
    mode: Mode,
}

impl<T: Real> Graph<T> {
    pub fn from_parts(
        authors: Vec<String>,
        mut edges: Vec<Edge<T>>,
        targeted_author: impl Into<String>,
        mode: Mode,
    ) -> Result<Self> {
        let n = authors.len();
        for e in &edges {
            if e.source >= n || e.target >= n {
                return Err(Error::Input(format!(
                    "edge {}->{} out of range for {n} vertices",
                    e.source, e.target
                )));
            }
            if e.source == e.target {
                return Err(Error::Input(format!("self-loop on vertex {}", e.source)));
            }
            if !(e.weight > T::zero() && e.weight.is_finite()) {
                return Err(Error::Input(format!(
                    "edge {}->{} has non-positive weight {}",
                    e.source, e.target, e.weight
                )));
            }
        }
        edges.sort_by_key(|e| (e.source, e.target));
        if edges
            .windows(2)
            .any(|w| (w[0].source, w[0].target) == (w[1].source, w[1].target))
        {
            return Err(Error::Input("parallel edges".into()));
        }
        Ok(Graph {
            authors,
            edges,
            targeted_author: targeted_author.into(),
            mode,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.authors.len()
    }

    pub fn authors(&self) -> &[String] {
        &self.authors
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn targeted_author(&self) -> &str {
        &self.targeted_author
    }

    /// Vertex of the targeted author, if they posted in the processed range.
    pub fn target_vertex(&self) -> Option<usize> {
        self.authors.iter().position(|a| *a == self.targeted_author)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn weight(&self, source: &str, target: &str) -> Option<T> {
        let s = self.authors.iter().position(|a| a == source)?;
        let t = self.authors.iter().position(|a| a == target)?;
        self.edges
            .binary_search_by_key(&(s, t), |e| (e.source, e.target))
            .ok()
            .map(|i| self.edges[i].weight)
    }

    /// Edge list dump: a `# target=<author> mode=<mode>` header, then one
    /// `u v w` line per edge with six decimals.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# target={} mode={}", self.targeted_author, self.mode)?;
        for e in &self.edges {
            writeln!(
                out,
                "{} {} {:.6}",
                self.authors[e.source],
                self.authors[e.target],
                e.weight.as_f64()
            )?;
        }
        Ok(())
    }
}

/// Builds the conversational graph of `context` for the requested mode.
pub fn extract_graph<T: Real>(
    context: &ContextSlice<'_>,
    params: WindowParams,
) -> Result<Graph<T>> {
    let params = WindowParams::new(params.window_len, params.mode)?;
    let targeted_author = context
        .messages
        .get(context.target_index)
        .map(|m| m.author_id.clone())
        .unwrap_or_default();
    if context.is_empty() {
        return Graph::from_parts(Vec::new(), Vec::new(), targeted_author, params.mode);
    }
    if context.target_index >= context.len() {
        return Err(Error::Input(format!(
            "target index {} outside a context of {} messages",
            context.target_index,
            context.len()
        )));
    }
    let range = match params.mode {
        Mode::Before => &context.messages[..=context.target_index],
        Mode::After => &context.messages[context.target_index..],
        Mode::Full => context.messages,
    };

    let mut authors: Vec<String> = Vec::new();
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let seq: Vec<usize> = range
        .iter()
        .map(|m| {
            *ids.entry(m.author_id.as_str()).or_insert_with(|| {
                authors.push(m.author_id.clone());
                authors.len() - 1
            })
        })
        .collect();

    let len = params.window_len;
    let span = T::of_usize(len - 1);
    let increments: Vec<T> = (0..len).map(|d| T::of_usize(len - d) / span).collect();
    let mut weights: HashMap<(usize, usize), T> = HashMap::new();
    for (i, &current) in seq.iter().enumerate() {
        for d in 1..len.min(i + 1) {
            let other = seq[i - d];
            if other != current {
                *weights.entry((current, other)).or_insert(T::zero()) += increments[d];
            }
        }
    }
    let edges = weights
        .into_iter()
        .map(|((source, target), weight)| Edge {
            source,
            target,
            weight,
        })
        .collect();
    Graph::from_parts(authors, edges, targeted_author, params.mode)
}

/// The Before, After and Full graphs of one context.
pub fn extract_all<T: Real>(
    context: &ContextSlice<'_>,
    window_len: usize,
) -> Result<[Graph<T>; 3]> {
    Ok([
        extract_graph(context, WindowParams::new(window_len, Mode::Before)?)?,
        extract_graph(context, WindowParams::new(window_len, Mode::After)?)?,
        extract_graph(context, WindowParams::new(window_len, Mode::Full)?)?,
    ])
}
