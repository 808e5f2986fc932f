//! Repeated stratified 70/30 evaluation with abuse-class precision, recall
//! and F-measure.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{train_pipeline, FeatureTable, FusionConfig, PipelineKind};

pub const REPETITIONS: usize = 10;
pub const TEST_FRACTION: f64 = 0.3;
const MIN_PER_CLASS: usize = 10;

/// Fold index of every position, balanced per class: each class is
/// shuffled with `seed` and dealt round-robin. `k` shrinks to the smaller
/// class size when that is below `k`.
pub fn stratified_folds(labels: &[bool], k: usize, seed: u64) -> Result<Vec<usize>> {
    let pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let neg: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    let k = k.min(pos.len()).min(neg.len());
    if k < 2 {
        return Err(Error::InsufficientData(format!(
            "cross-fitting needs at least 2 examples per class, got {} and {}",
            pos.len(),
            neg.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0; labels.len()];
    let mut offset = 0;
    for mut class in [pos, neg] {
        class.shuffle(&mut rng);
        for (r, &i) in class.iter().enumerate() {
            folds[i] = (r + offset) % k;
        }
        offset += class.len();
    }
    Ok(folds)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub repetitions: Vec<Split>,
}

/// Test-part sizes `(abuse, non_abuse)`: the test part holds
/// `round(0.3 N)` items, of which `round(0.3 n_abuse)` are abuse (halves
/// rounded up).
pub fn test_sizes(n_abuse: usize, n_non_abuse: usize) -> (usize, usize) {
    let round = |x: f64| (x + 0.5).floor() as usize;
    let total = round(TEST_FRACTION * (n_abuse + n_non_abuse) as f64);
    let abuse = round(TEST_FRACTION * n_abuse as f64).min(total);
    (abuse, (total - abuse).min(n_non_abuse))
}

/// Ten seeded stratified 70/30 splits of the rows with `labels`.
pub fn make_splits(labels: &[bool], seed: u64) -> Result<SplitPlan> {
    let pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let neg: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    if pos.len() < MIN_PER_CLASS || neg.len() < MIN_PER_CLASS {
        return Err(Error::InsufficientData(format!(
            "need at least {MIN_PER_CLASS} items per class, got {} abuse and {} non-abuse",
            pos.len(),
            neg.len()
        )));
    }
    let (test_pos, test_neg) = test_sizes(pos.len(), neg.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let repetitions = (0..REPETITIONS)
        .map(|_| {
            let mut p = pos.clone();
            let mut q = neg.clone();
            p.shuffle(&mut rng);
            q.shuffle(&mut rng);
            let mut test: Vec<usize> = p[..test_pos].iter().chain(&q[..test_neg]).copied().collect();
            let mut train: Vec<usize> = p[test_pos..].iter().chain(&q[test_neg..]).copied().collect();
            test.sort_unstable();
            train.sort_unstable();
            Split { train, test }
        })
        .collect();
    Ok(SplitPlan { seed, repetitions })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

/// Abuse-class metrics; a ratio with a zero denominator is 0.
pub fn abuse_metrics(predicted: &[bool], truth: &[bool]) -> Metrics {
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fn_ = 0usize;
    for (&p, &t) in predicted.iter().zip(truth) {
        match (p, t) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            _ => {}
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    Metrics {
        precision,
        recall,
        f_measure: f_measure(precision, recall),
    }
}

pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepetitionResult {
    pub train_size: usize,
    pub test_size: usize,
    pub metrics: Metrics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub kind: Option<PipelineKind>,
    pub feature_count: usize,
    pub seed: u64,
    pub repetitions: Vec<RepetitionResult>,
    pub mean: Metrics,
    /// Population standard deviation over repetitions.
    pub std: Metrics,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub total_seconds: f64,
    pub train_seconds: f64,
    pub score_seconds: f64,
    /// Scoring time per test message.
    pub per_message_seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub report: EvalReport,
    pub runtime: Runtime,
}

fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Runs the protocol with a caller-supplied model: `fit_score(split)`
/// trains on `split.train` and returns abuse probabilities for
/// `split.test`, plus the time spent training and scoring.
pub fn evaluate_with<F>(labels: &[bool], plan: &SplitPlan, feature_count: usize, threshold: f64, fit_score: F) -> Result<Evaluation>
where
    F: Fn(&Split) -> Result<(Vec<f64>, f64, f64)> + Sync,
{
    let start = Instant::now();
    let results: Vec<(RepetitionResult, f64, f64)> = plan
        .repetitions
        .par_iter()
        .enumerate()
        .map(|(r, split)| {
            let (probs, train_s, score_s) = fit_score(split)
                .map_err(|e| Error::Fit(format!("repetition {r}: {e}")))?;
            if probs.len() != split.test.len() {
                return Err(Error::Fit(format!(
                    "repetition {r}: {} scores for {} test messages",
                    probs.len(),
                    split.test.len()
                )));
            }
            let predicted: Vec<bool> = probs.iter().map(|&p| p >= threshold).collect();
            let truth: Vec<bool> = split.test.iter().map(|&i| labels[i]).collect();
            Ok((
                RepetitionResult {
                    train_size: split.train.len(),
                    test_size: split.test.len(),
                    metrics: abuse_metrics(&predicted, &truth),
                },
                train_s,
                score_s,
            ))
        })
        .collect::<Result<_>>()?;
    let reps: Vec<RepetitionResult> = results.iter().map(|r| r.0.clone()).collect();
    let (p, sp) = mean_std(reps.iter().map(|r| r.metrics.precision));
    let (rc, sr) = mean_std(reps.iter().map(|r| r.metrics.recall));
    let (f, sf) = mean_std(reps.iter().map(|r| r.metrics.f_measure));
    let train_seconds: f64 = results.iter().map(|r| r.1).sum();
    let score_seconds: f64 = results.iter().map(|r| r.2).sum();
    let scored: usize = reps.iter().map(|r| r.test_size).sum();
    Ok(Evaluation {
        report: EvalReport {
            kind: None,
            feature_count,
            seed: plan.seed,
            repetitions: reps,
            mean: Metrics {
                precision: p,
                recall: rc,
                f_measure: f,
            },
            std: Metrics {
                precision: sp,
                recall: sr,
                f_measure: sf,
            },
        },
        runtime: Runtime {
            total_seconds: start.elapsed().as_secs_f64(),
            train_seconds,
            score_seconds,
            per_message_seconds: if scored > 0 { score_seconds / scored as f64 } else { 0.0 },
        },
    })
}

/// Trains and scores `kind` on every split of `plan`.
pub fn evaluate(kind: PipelineKind, table: &FeatureTable, plan: &SplitPlan, config: &FusionConfig) -> Result<Evaluation> {
    let feature_count = match &config.columns {
        Some(c) => c.len(),
        None => kind.manifest(&table.graph_manifest).len(),
    };
    let mut eval = evaluate_with(&table.labels, plan, feature_count, config.threshold, |split| {
        let t = Instant::now();
        let p = train_pipeline(kind, table, &split.train, config)?;
        let train_s = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let probs = p.score_rows(table, &split.test)?;
        Ok((probs, train_s, t.elapsed().as_secs_f64()))
    })?;
    eval.report.kind = Some(kind);
    Ok(eval)
}

/// Pearson correlation of two aligned score vectors.
pub fn score_correlation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Input(format!("{} scores vs {}", a.len(), b.len())));
    }
    if a.len() < 2 {
        return Err(Error::InsufficientData("correlation needs two points".into()));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::InsufficientData("zero-variance scores".into()));
    }
    Ok(sab / (saa.sqrt() * sbb.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced(n: usize) -> Vec<bool> {
        (0..2 * n).map(|i| i < n).collect()
    }

    #[test]
    fn paper_sized_split() {
        assert_eq!(test_sizes(655, 655), (197, 196));
        let plan = make_splits(&balanced(655), 42).unwrap();
        assert_eq!(plan.repetitions.len(), 10);
        let labels = balanced(655);
        for s in &plan.repetitions {
            let abuse = s.test.iter().filter(|&&i| labels[i]).count();
            assert_eq!((abuse, s.test.len() - abuse), (197, 196));
            assert_eq!(s.train.len() + s.test.len(), 1310);
            let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
            all.sort_unstable();
            assert!(all.iter().enumerate().all(|(i, &x)| i == x));
        }
        assert_eq!(plan, make_splits(&labels, 42).unwrap());
        assert_ne!(plan, make_splits(&labels, 43).unwrap());
    }

    #[test]
    fn too_small() {
        assert!(make_splits(&balanced(9), 1).is_err());
    }

    #[test]
    fn metric_formulas() {
        let truth = balanced(5);
        assert_eq!(
            abuse_metrics(&truth, &truth),
            Metrics {
                precision: 1.0,
                recall: 1.0,
                f_measure: 1.0
            }
        );
        let m = abuse_metrics(&[true; 10], &truth);
        assert_eq!((m.precision, m.recall), (0.5, 1.0));
        assert!((m.f_measure - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(abuse_metrics(&[false; 10], &truth).f_measure, 0.0);
    }

    #[test]
    fn oracle_predictor_scores_one() {
        let labels = balanced(20);
        let plan = make_splits(&labels, 7).unwrap();
        let e = evaluate_with(&labels, &plan, 1, 0.5, |s| {
            Ok((s.test.iter().map(|&i| if labels[i] { 1.0 } else { 0.0 }).collect(), 0.0, 0.0))
        })
        .unwrap();
        assert_eq!(e.report.mean.f_measure, 1.0);
        assert_eq!(e.report.std.f_measure, 0.0);
    }

    #[test]
    fn correlation_extremes() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((score_correlation(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((score_correlation(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!(score_correlation(&x, &[1.0; 4]).is_err());
        assert!(score_correlation(&x, &[1.0; 3]).is_err());
    }

    #[test]
    fn folds_are_stratified() {
        let labels = balanced(12);
        let f = stratified_folds(&labels, 5, 3).unwrap();
        for k in 0..5 {
            let pos = (0..24).filter(|&i| f[i] == k && labels[i]).count();
            assert!((2..=3).contains(&pos));
        }
        assert_eq!(stratified_folds(&[true, false, true, false], 5, 0).unwrap().iter().max(), Some(&1));
    }
}
