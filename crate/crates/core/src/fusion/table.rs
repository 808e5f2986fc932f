use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::content::{content_manifest, BadWordLexicon, TextSample};
use crate::convgraph::{extract_all, DEFAULT_WINDOW_LEN};
use crate::corpus::{thread_context, Corpus, LabeledDataset};
use crate::error::{Error, Result};
use crate::graphmetrics::{compute_feature_vector, feature_manifest, GraphFeatureConfig};

/// How contexts and graphs are extracted around a targeted message.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContextParams {
    pub before: usize,
    pub after: usize,
    pub window_len: usize,
}

impl Default for ContextParams {
    fn default() -> Self {
        ContextParams {
            before: 674,
            after: 675,
            window_len: DEFAULT_WINDOW_LEN,
        }
    }
}

/// Graph features of one targeted message.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphRow {
    pub values: Vec<f64>,
    pub missing: Vec<bool>,
}

pub fn graph_row(
    corpus: &Corpus,
    message_id: &str,
    context: &ContextParams,
    config: &GraphFeatureConfig,
) -> Result<GraphRow> {
    let ctx = thread_context(corpus, message_id, context.before, context.after)?;
    let [before, after, full] = extract_all::<f64>(&ctx, context.window_len)?;
    let target = &ctx.target().author_id;
    let f = compute_feature_vector(&before, &after, &full, target, config);
    Ok(GraphRow {
        values: f.values,
        missing: f.missing,
    })
}

/// Every labeled message with its text sample and graph features.
///
/// The graph block may also hold arbitrary numeric features (see
/// `from_matrix`), in which case there is no text block.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    pub ids: Vec<String>,
    pub labels: Vec<bool>,
    pub text: Option<Vec<TextSample>>,
    pub graph_manifest: Vec<String>,
    pub graph: Vec<Vec<f64>>,
    pub graph_missing: Vec<Vec<bool>>,
    pub context: ContextParams,
    pub graph_config: GraphFeatureConfig,
    /// Messages dropped because their context could not be resolved.
    pub skipped: Vec<(String, String)>,
}

impl FeatureTable {
    /// Featurizes `dataset` in parallel; output order follows the dataset.
    pub fn build(
        corpus: &Corpus,
        dataset: &LabeledDataset,
        lexicon: &BadWordLexicon,
        context: ContextParams,
        graph_config: GraphFeatureConfig,
    ) -> Result<Self> {
        let rows: Vec<_> = dataset
            .items
            .par_iter()
            .map(|item| {
                let message = corpus
                    .get(&item.message_id)
                    .ok_or_else(|| Error::NotFound(item.message_id.clone()))?;
                let g = graph_row(corpus, &item.message_id, &context, &graph_config)?;
                Ok::<_, Error>((TextSample::new(&message.text, lexicon), g))
            })
            .collect();
        let mut table = FeatureTable {
            ids: Vec::new(),
            labels: Vec::new(),
            text: Some(Vec::new()),
            graph_manifest: feature_manifest(&graph_config),
            graph: Vec::new(),
            graph_missing: Vec::new(),
            context,
            graph_config,
            skipped: Vec::new(),
        };
        for (item, row) in dataset.items.iter().zip(rows) {
            match row {
                Ok((text, g)) => {
                    table.ids.push(item.message_id.clone());
                    table.labels.push(item.label.is_abuse());
                    table.text.as_mut().expect("built with text").push(text);
                    table.graph.push(g.values);
                    table.graph_missing.push(g.missing);
                }
                Err(e) => table.skipped.push((item.message_id.clone(), e.to_string())),
            }
        }
        if table.ids.is_empty() {
            return Err(Error::InsufficientData("no message could be featurized".into()));
        }
        Ok(table)
    }

    /// A table of plain numeric features, handled like a graph block.
    pub fn from_matrix(
        ids: Vec<String>,
        labels: Vec<bool>,
        manifest: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if ids.len() != labels.len() || ids.len() != rows.len() {
            return Err(Error::Input("ids, labels and rows differ in length".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != manifest.len()) {
            return Err(Error::Input(format!(
                "row of width {} for a manifest of {}",
                r.len(),
                manifest.len()
            )));
        }
        let missing = rows.iter().map(|r| vec![false; r.len()]).collect();
        Ok(FeatureTable {
            ids,
            labels,
            text: None,
            graph_manifest: manifest,
            graph: rows,
            graph_missing: missing,
            context: ContextParams::default(),
            graph_config: GraphFeatureConfig::default(),
            skipped: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn has_text(&self) -> bool {
        self.text.is_some()
    }

    pub fn text_sample(&self, i: usize) -> Option<&TextSample> {
        self.text.as_ref().map(|t| &t[i])
    }

    /// Writes `message_id,label,<names…>` rows.
    pub fn write_csv<W: Write>(&self, names: &[String], rows: &[Vec<f64>], mut out: W) -> Result<()> {
        write!(out, "message_id,label")?;
        for n in names {
            write!(out, ",{n}")?;
        }
        writeln!(out)?;
        for ((id, &label), row) in self.ids.iter().zip(&self.labels).zip(rows) {
            write!(out, "{id},{}", if label { "abuse" } else { "non_abuse" })?;
            for v in row {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn write_graph_csv<W: Write>(&self, out: W) -> Result<()> {
        self.write_csv(&self.graph_manifest, &self.graph, out)
    }

    /// Content features with text models fitted on the whole table. The
    /// pipelines refit those models on each training set instead.
    pub fn content_rows(&self) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
        let text = self
            .text
            .as_ref()
            .ok_or_else(|| Error::Unsupported("table has no text block".into()))?;
        let samples: Vec<&TextSample> = text.iter().collect();
        let models = crate::content::TextModels::fit(&samples, &self.labels)?;
        Ok((
            content_manifest(),
            text.iter().map(|s| models.features(s)).collect(),
        ))
    }
}
