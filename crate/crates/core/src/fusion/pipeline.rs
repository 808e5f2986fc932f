use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::table::{graph_row, ContextParams, FeatureTable};
use crate::content::{content_manifest, BadWordLexicon, TextModels, TextSample};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::eval::stratified_folds;
use crate::graphmetrics::GraphFeatureConfig;
use crate::learn::{Calibrator, LinearSvm, Scaler, SvmParams};

pub const PIPELINE_SCHEMA: &str = "convabuse.pipeline/1";
pub const CONTENT_SCORE: &str = "ContentScore";
pub const GRAPH_SCORE: &str = "GraphScore";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineKind {
    Content,
    Graph,
    Early,
    Late,
    Hybrid,
}

impl PipelineKind {
    pub const ALL: [PipelineKind; 5] = [
        PipelineKind::Content,
        PipelineKind::Graph,
        PipelineKind::Early,
        PipelineKind::Late,
        PipelineKind::Hybrid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PipelineKind::Content => "content",
            PipelineKind::Graph => "graph",
            PipelineKind::Early => "early",
            PipelineKind::Late => "late",
            PipelineKind::Hybrid => "hybrid",
        }
    }

    /// Names of the inputs the final classifier of this pipeline sees.
    pub fn manifest(self, graph_manifest: &[String]) -> Vec<String> {
        let scores = || vec![CONTENT_SCORE.to_string(), GRAPH_SCORE.to_string()];
        match self {
            PipelineKind::Content => content_manifest(),
            PipelineKind::Graph => graph_manifest.to_vec(),
            PipelineKind::Early => [content_manifest(), graph_manifest.to_vec()].concat(),
            PipelineKind::Late => scores(),
            PipelineKind::Hybrid => [content_manifest(), graph_manifest.to_vec(), scores()].concat(),
        }
    }
}

impl fmt::Display for PipelineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for PipelineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PipelineKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown pipeline kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FusionConfig {
    pub svm: SvmParams,
    /// Folds of the internal cross-fitting that produces out-of-fold
    /// decision values for calibration and the fusion scores.
    pub inner_folds: usize,
    pub seed: u64,
    /// Use in-sample instead of out-of-fold scores (ablation only).
    pub late_in_sample: bool,
    pub threshold: f64,
    /// Inputs of the final classifier; all when unset.
    pub columns: Option<Vec<String>>,
    /// Inputs of the content classifier of late and hybrid fusion.
    pub content_columns: Option<Vec<String>>,
    /// Inputs of the graph classifier of late and hybrid fusion.
    pub graph_columns: Option<Vec<String>>,
}

impl Default for FusionConfig {
    fn default() -> Self {
        FusionConfig {
            svm: SvmParams::default(),
            inner_folds: 5,
            seed: 0,
            late_in_sample: false,
            threshold: 0.5,
            columns: None,
            content_columns: None,
            graph_columns: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocks {
    pub content: bool,
    pub graph: bool,
    pub scores: bool,
}

/// One message as the classifiers see it.
#[derive(Clone, Copy, Debug)]
pub struct SampleRef<'a> {
    pub text: Option<&'a TextSample>,
    pub graph: &'a [f64],
}

fn sample(table: &FeatureTable, i: usize) -> SampleRef<'_> {
    SampleRef {
        text: table.text_sample(i),
        graph: &table.graph[i],
    }
}

fn block_names(blocks: Blocks, graph_manifest: &[String]) -> Vec<String> {
    let mut names = Vec::new();
    if blocks.content {
        names.extend(content_manifest());
    }
    if blocks.graph {
        names.extend(graph_manifest.iter().cloned());
    }
    if blocks.scores {
        names.push(CONTENT_SCORE.into());
        names.push(GRAPH_SCORE.into());
    }
    names
}

fn select_columns(all: &[String], wanted: &Option<Vec<String>>) -> Result<Vec<usize>> {
    let Some(wanted) = wanted else {
        return Ok((0..all.len()).collect());
    };
    for w in wanted {
        if !all.contains(w) {
            return Err(Error::Config(format!("unknown feature {w:?}")));
        }
    }
    let cols: Vec<usize> = (0..all.len()).filter(|&i| wanted.contains(&all[i])).collect();
    if cols.is_empty() {
        return Err(Error::Config("empty feature selection".into()));
    }
    Ok(cols)
}

/// Scaler and SVM over a fixed set of columns, with the text models the
/// content block needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Core {
    text_models: Option<TextModels>,
    columns: Vec<usize>,
    scaler: Scaler<f64>,
    svm: LinearSvm<f64>,
}

impl Core {
    fn row(&self, blocks: Blocks, s: SampleRef<'_>, scores: Option<[f64; 2]>) -> Result<Vec<f64>> {
        let mut full = Vec::new();
        if blocks.content {
            let text = s
                .text
                .ok_or_else(|| Error::Input("content features need the message text".into()))?;
            let models = self.text_models.as_ref().expect("content stages carry text models");
            full.extend(models.features(text));
        }
        if blocks.graph {
            full.extend_from_slice(s.graph);
        }
        if blocks.scores {
            full.extend(scores.expect("score stages get scores"));
        }
        Ok(self.columns.iter().map(|&c| full[c]).collect())
    }

    fn decision(&self, blocks: Blocks, s: SampleRef<'_>, scores: Option<[f64; 2]>) -> Result<f64> {
        let row = self.row(blocks, s, scores)?;
        Ok(self.svm.decision(&self.scaler.apply(&row)))
    }

    fn fit(
        table: &FeatureTable,
        train: &[usize],
        blocks: Blocks,
        columns: &[usize],
        scores: Option<&[[f64; 2]]>,
        svm: &SvmParams,
    ) -> Result<Self> {
        let labels: Vec<bool> = train.iter().map(|&i| table.labels[i]).collect();
        let text_models = if blocks.content {
            let samples: Vec<&TextSample> = train
                .iter()
                .map(|&i| {
                    table
                        .text_sample(i)
                        .ok_or_else(|| Error::Unsupported("table has no text block".into()))
                })
                .collect::<Result<_>>()?;
            Some(TextModels::fit(&samples, &labels)?)
        } else {
            None
        };
        let mut core = Core {
            text_models,
            columns: columns.to_vec(),
            scaler: Scaler {
                mean: Vec::new(),
                std: Vec::new(),
            },
            svm: LinearSvm {
                weights: Vec::new(),
                bias: 0.0,
                c: svm.c,
            },
        };
        let rows: Vec<Vec<f64>> = train
            .iter()
            .enumerate()
            .map(|(k, &i)| core.row(blocks, sample(table, i), scores.map(|s| s[k])))
            .collect::<Result<_>>()?;
        core.scaler = Scaler::fit(&rows);
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| core.scaler.apply(r)).collect();
        core.svm = LinearSvm::fit(&scaled, &labels, svm)?;
        Ok(core)
    }
}

/// A calibrated classifier: features → SVM margin → probability of abuse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub blocks: Blocks,
    /// Names of the classifier inputs, in input order.
    pub manifest: Vec<String>,
    core: Core,
    pub calibrator: Calibrator,
}

impl Stage {
    pub fn svm(&self) -> &LinearSvm<f64> {
        &self.core.svm
    }

    pub fn scaler(&self) -> &Scaler<f64> {
        &self.core.scaler
    }

    pub fn text_models(&self) -> Option<&TextModels> {
        self.core.text_models.as_ref()
    }

    pub fn decision(&self, s: SampleRef<'_>, scores: Option<[f64; 2]>) -> Result<f64> {
        self.core.decision(self.blocks, s, scores)
    }

    pub fn probability(&self, s: SampleRef<'_>, scores: Option<[f64; 2]>) -> Result<f64> {
        Ok(self.calibrator.probability(self.decision(s, scores)?))
    }
}

/// Trains a calibrated stage on `train`. Also returns the probabilities
/// of the training messages themselves: out-of-fold (each from a model that
/// did not see it) unless `late_in_sample` is set.
pub fn fit_stage(
    table: &FeatureTable,
    train: &[usize],
    blocks: Blocks,
    columns: &Option<Vec<String>>,
    scores: Option<&[[f64; 2]]>,
    config: &FusionConfig,
) -> Result<(Stage, Vec<f64>)> {
    let names = block_names(blocks, &table.graph_manifest);
    let cols = select_columns(&names, columns)?;
    let manifest: Vec<String> = cols.iter().map(|&c| names[c].clone()).collect();
    let labels: Vec<bool> = train.iter().map(|&i| table.labels[i]).collect();
    let core = Core::fit(table, train, blocks, &cols, scores, &config.svm)?;

    let decisions: Vec<f64> = if config.late_in_sample {
        train
            .iter()
            .enumerate()
            .map(|(k, &i)| core.decision(blocks, sample(table, i), scores.map(|s| s[k])))
            .collect::<Result<_>>()?
    } else {
        let folds = stratified_folds(&labels, config.inner_folds, config.seed)?;
        let k = folds.iter().max().map_or(0, |&f| f + 1);
        let per_fold: Vec<Vec<(usize, f64)>> = (0..k)
            .into_par_iter()
            .map(|f| {
                let inner: Vec<usize> = (0..train.len()).filter(|&p| folds[p] != f).collect();
                let inner_train: Vec<usize> = inner.iter().map(|&p| train[p]).collect();
                let inner_scores: Option<Vec<[f64; 2]>> =
                    scores.map(|s| inner.iter().map(|&p| s[p]).collect());
                let m = Core::fit(
                    table,
                    &inner_train,
                    blocks,
                    &cols,
                    inner_scores.as_deref(),
                    &config.svm,
                )?;
                (0..train.len())
                    .filter(|&p| folds[p] == f)
                    .map(|p| {
                        m.decision(blocks, sample(table, train[p]), scores.map(|s| s[p]))
                            .map(|d| (p, d))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let mut out = vec![0.0; train.len()];
        for (p, d) in per_fold.into_iter().flatten() {
            out[p] = d;
        }
        out
    };
    let calibrator = Calibrator::fit(&decisions, &labels)?;
    let probs = decisions.iter().map(|&d| calibrator.probability(d)).collect();
    Ok((
        Stage {
            blocks,
            manifest,
            core,
            calibrator,
        },
        probs,
    ))
}

pub fn manifest_hash(names: &[String]) -> String {
    let mut h = Sha256::new();
    for n in names {
        h.update(n.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedPipeline {
    pub schema: String,
    pub kind: PipelineKind,
    pub context: ContextParams,
    pub graph_config: GraphFeatureConfig,
    pub threshold: f64,
    pub content_manifest_sha256: String,
    pub graph_manifest_sha256: String,
    /// Base classifiers of late and hybrid fusion.
    pub content: Option<Stage>,
    pub graph: Option<Stage>,
    pub main: Stage,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub probability: f64,
    pub abuse: bool,
}

const CONTENT: Blocks = Blocks {
    content: true,
    graph: false,
    scores: false,
};
const GRAPH: Blocks = Blocks {
    content: false,
    graph: true,
    scores: false,
};

/// Trains `kind` on the `train` rows of `table`. Nothing outside those rows
/// (labels included) influences the result.
pub fn train_pipeline(
    kind: PipelineKind,
    table: &FeatureTable,
    train: &[usize],
    config: &FusionConfig,
) -> Result<TrainedPipeline> {
    if train.is_empty() {
        return Err(Error::InsufficientData("empty training set".into()));
    }
    let bases = || -> Result<(Stage, Stage, Vec<[f64; 2]>)> {
        let (c, cp) = fit_stage(table, train, CONTENT, &config.content_columns, None, config)?;
        let (g, gp) = fit_stage(table, train, GRAPH, &config.graph_columns, None, config)?;
        let scores = cp.into_iter().zip(gp).map(|(a, b)| [a, b]).collect();
        Ok((c, g, scores))
    };
    let (content, graph, main) = match kind {
        PipelineKind::Content => (None, None, fit_stage(table, train, CONTENT, &config.columns, None, config)?.0),
        PipelineKind::Graph => (None, None, fit_stage(table, train, GRAPH, &config.columns, None, config)?.0),
        PipelineKind::Early => {
            let blocks = Blocks {
                content: true,
                graph: true,
                scores: false,
            };
            (None, None, fit_stage(table, train, blocks, &config.columns, None, config)?.0)
        }
        PipelineKind::Late | PipelineKind::Hybrid => {
            let (c, g, scores) = bases()?;
            let raw = kind == PipelineKind::Hybrid;
            let blocks = Blocks {
                content: raw,
                graph: raw,
                scores: true,
            };
            let main = fit_stage(table, train, blocks, &config.columns, Some(&scores), config)?.0;
            (Some(c), Some(g), main)
        }
    };
    Ok(TrainedPipeline {
        schema: PIPELINE_SCHEMA.into(),
        kind,
        context: table.context,
        graph_config: table.graph_config.clone(),
        threshold: config.threshold,
        content_manifest_sha256: manifest_hash(&content_manifest()),
        graph_manifest_sha256: manifest_hash(&table.graph_manifest),
        content,
        graph,
        main,
    })
}

impl TrainedPipeline {
    fn uses_graph(&self) -> bool {
        self.kind != PipelineKind::Content
    }

    /// Number of inputs of the final classifier.
    pub fn width(&self) -> usize {
        self.main.manifest.len()
    }

    /// Fails unless `table` was featurized like the training data.
    pub fn check_table(&self, table: &FeatureTable) -> Result<()> {
        if self.schema != PIPELINE_SCHEMA {
            return Err(Error::ManifestMismatch {
                expected: PIPELINE_SCHEMA.into(),
                found: self.schema.clone(),
            });
        }
        let found = manifest_hash(&table.graph_manifest);
        if self.uses_graph() && found != self.graph_manifest_sha256 {
            return Err(Error::ManifestMismatch {
                expected: self.graph_manifest_sha256.clone(),
                found,
            });
        }
        let content = manifest_hash(&content_manifest());
        if content != self.content_manifest_sha256 {
            return Err(Error::ManifestMismatch {
                expected: self.content_manifest_sha256.clone(),
                found: content,
            });
        }
        if self.uses_graph() && table.context != self.context {
            return Err(Error::ManifestMismatch {
                expected: format!("{:?}", self.context),
                found: format!("{:?}", table.context),
            });
        }
        Ok(())
    }

    pub fn probability(&self, s: SampleRef<'_>) -> Result<f64> {
        let scores = match (&self.content, &self.graph) {
            (Some(c), Some(g)) => Some([c.probability(s, None)?, g.probability(s, None)?]),
            _ => None,
        };
        self.main.probability(s, scores)
    }

    pub fn score(&self, s: SampleRef<'_>) -> Result<Score> {
        let probability = self.probability(s)?;
        Ok(Score {
            probability,
            abuse: probability >= self.threshold,
        })
    }

    /// Probabilities of the `rows` of `table`.
    pub fn score_rows(&self, table: &FeatureTable, rows: &[usize]) -> Result<Vec<f64>> {
        self.check_table(table)?;
        rows.iter().map(|&i| self.probability(sample(table, i))).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: TrainedPipeline = serde_json::from_str(text)?;
        if p.schema != PIPELINE_SCHEMA {
            return Err(Error::ManifestMismatch {
                expected: PIPELINE_SCHEMA.into(),
                found: p.schema,
            });
        }
        Ok(p)
    }
}

/// Scores one corpus message, extracting its context with the pipeline's
/// own parameters.
pub fn score_message(
    pipeline: &TrainedPipeline,
    corpus: &Corpus,
    message_id: &str,
    lexicon: &BadWordLexicon,
) -> Result<Score> {
    let message = corpus
        .get(message_id)
        .ok_or_else(|| Error::NotFound(message_id.to_string()))?;
    let text = TextSample::new(&message.text, lexicon);
    let graph = if pipeline.uses_graph() {
        let config: &GraphFeatureConfig = &pipeline.graph_config;
        let found = manifest_hash(&crate::graphmetrics::feature_manifest(config));
        if found != pipeline.graph_manifest_sha256 {
            return Err(Error::ManifestMismatch {
                expected: pipeline.graph_manifest_sha256.clone(),
                found,
            });
        }
        graph_row(corpus, message_id, &pipeline.context, config)?.values
    } else {
        Vec::new()
    };
    pipeline.score(SampleRef {
        text: Some(&text),
        graph: &graph,
    })
}
