//! Recursive feature elimination by linear-SVM weight magnitude, and the
//! Top Features subset retaining a fraction of the full F-measure.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{evaluate, SplitPlan};
use crate::fusion::{train_pipeline, FeatureTable, FusionConfig, PipelineKind};
use crate::learn::LinearSvm;

pub const DEFAULT_THRESHOLD: f64 = 0.97;

/// Features by decreasing `|w|`; equal magnitudes keep manifest order.
pub fn rank_features(svm: &LinearSvm<f64>, manifest: &[String]) -> Result<Vec<String>> {
    if svm.weights.len() != manifest.len() {
        return Err(Error::ManifestMismatch {
            expected: format!("{} weights", manifest.len()),
            found: format!("{} weights", svm.weights.len()),
        });
    }
    let mut order: Vec<usize> = (0..manifest.len()).collect();
    order.sort_by(|&a, &b| svm.weights[b].abs().total_cmp(&svm.weights[a].abs()).then(a.cmp(&b)));
    Ok(order.into_iter().map(|i| manifest[i].clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EliminationStep {
    pub step: usize,
    pub removed_feature: String,
    pub remaining_count: usize,
    pub f_measure: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EliminationTrace {
    pub kind: PipelineKind,
    pub initial: Vec<String>,
    /// F-measure with every initial feature.
    pub full_f: f64,
    pub steps: Vec<EliminationStep>,
}

impl EliminationTrace {
    /// Features left after `steps[k]`.
    pub fn remaining_after(&self, k: usize) -> Vec<String> {
        let removed: Vec<&String> = self.steps[..=k].iter().map(|s| &s.removed_feature).collect();
        self.initial
            .iter()
            .filter(|f| !removed.contains(f))
            .cloned()
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "step,removed_feature,remaining_count,f_measure")?;
        for s in &self.steps {
            writeln!(out, "{},{},{},{}", s.step, s.removed_feature, s.remaining_count, s.f_measure)?;
        }
        Ok(())
    }
}

/// Backward elimination: the model ranking the features is trained on the
/// whole table, while each reduced set is scored with the split protocol.
/// Late fusion is not eliminated directly; its Top Features come from the
/// content and graph traces (see `late_top_features`).
pub fn rfe(kind: PipelineKind, table: &FeatureTable, plan: &SplitPlan, config: &FusionConfig) -> Result<EliminationTrace> {
    if kind == PipelineKind::Late {
        return Err(Error::Unsupported(
            "late fusion takes the Top Features of its content and graph classifiers".into(),
        ));
    }
    let initial = config
        .columns
        .clone()
        .unwrap_or_else(|| kind.manifest(&table.graph_manifest));
    if initial.len() < 2 {
        return Err(Error::InsufficientData("fewer than 2 features: nothing to eliminate".into()));
    }
    let everything: Vec<usize> = (0..table.len()).collect();
    let with = |columns: &[String]| FusionConfig {
        columns: Some(columns.to_vec()),
        ..config.clone()
    };
    let full_f = evaluate(kind, table, plan, &with(&initial))?.report.mean.f_measure;
    let mut current = initial.clone();
    let mut steps = Vec::with_capacity(initial.len() - 1);
    while current.len() > 1 {
        let model = train_pipeline(kind, table, &everything, &with(&current))?;
        let ranking = rank_features(model.main.svm(), &model.main.manifest)?;
        let removed = ranking.last().expect("at least two features").clone();
        current.retain(|f| *f != removed);
        let f = evaluate(kind, table, plan, &with(&current))?.report.mean.f_measure;
        steps.push(EliminationStep {
            step: steps.len() + 1,
            removed_feature: removed,
            remaining_count: current.len(),
            f_measure: f,
        });
    }
    Ok(EliminationTrace {
        kind,
        initial,
        full_f,
        steps,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopFeatures {
    pub features: Vec<String>,
    pub f_measure: f64,
    /// Set when no reduced set qualifies and the full set is returned.
    pub warning: Option<String>,
}

/// The smallest set of the trace with `F ≥ threshold × full_F`.
pub fn top_features(trace: &EliminationTrace, threshold: f64) -> TopFeatures {
    let target = threshold * trace.full_f;
    for k in (0..trace.steps.len()).rev() {
        if trace.steps[k].f_measure >= target {
            return TopFeatures {
                features: trace.remaining_after(k),
                f_measure: trace.steps[k].f_measure,
                warning: None,
            };
        }
    }
    TopFeatures {
        features: trace.initial.clone(),
        f_measure: trace.full_f,
        warning: Some(format!(
            "no reduced feature set reaches {threshold} of the full F-measure; keeping all {} features",
            trace.initial.len()
        )),
    }
}

/// Late fusion restricted to Top Features: its two base classifiers use
/// their own Top Features.
pub fn late_top_features(config: &FusionConfig, content_tf: &[String], graph_tf: &[String]) -> FusionConfig {
    FusionConfig {
        content_columns: Some(content_tf.to_vec()),
        graph_columns: Some(graph_tf.to_vec()),
        ..config.clone()
    }
}
