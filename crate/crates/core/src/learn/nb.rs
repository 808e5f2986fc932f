use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bernoulli Naive Bayes over token presence, Laplace smoothing α = 1.
///
/// Index 0 of every pair is the abuse class, index 1 the non-abuse class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub vocabulary: BTreeMap<String, usize>,
    pub log_prior: [f64; 2],
    /// `ln P(t present | c)` per vocabulary index.
    pub log_present: Vec<[f64; 2]>,
    /// `ln P(t absent | c)` per vocabulary index.
    pub log_absent: Vec<[f64; 2]>,
    /// `Σ_t ln P(t absent | c)`, the log-likelihood of an empty document.
    absent_total: [f64; 2],
}

impl NbModel {
    pub fn fit<D: AsRef<[String]>>(documents: &[D], labels: &[bool]) -> Result<Self> {
        if documents.len() != labels.len() {
            return Err(Error::Input(format!(
                "{} documents but {} labels",
                documents.len(),
                labels.len()
            )));
        }
        let n_abuse = labels.iter().filter(|&&l| l).count();
        let n = [n_abuse, labels.len() - n_abuse];
        if n[0] == 0 || n[1] == 0 {
            return Err(Error::Fit("naive Bayes needs documents of both classes".into()));
        }
        let mut counts: BTreeMap<String, [usize; 2]> = BTreeMap::new();
        for (doc, &label) in documents.iter().zip(labels) {
            let c = if label { 0 } else { 1 };
            let distinct: BTreeSet<&String> = doc.as_ref().iter().collect();
            for t in distinct {
                counts.entry(t.clone()).or_insert([0, 0])[c] += 1;
            }
        }
        let total = labels.len() as f64;
        let log_prior = [(n[0] as f64 / total).ln(), (n[1] as f64 / total).ln()];
        let mut vocabulary = BTreeMap::new();
        let mut log_present = Vec::with_capacity(counts.len());
        let mut log_absent = Vec::with_capacity(counts.len());
        let mut absent_total = [0.0; 2];
        for (i, (token, k)) in counts.into_iter().enumerate() {
            vocabulary.insert(token, i);
            let mut present = [0.0; 2];
            let mut absent = [0.0; 2];
            for c in 0..2 {
                let p = (k[c] as f64 + 1.0) / (n[c] as f64 + 2.0);
                present[c] = p.ln();
                absent[c] = (-p).ln_1p();
                absent_total[c] += absent[c];
            }
            log_present.push(present);
            log_absent.push(absent);
        }
        Ok(NbModel {
            vocabulary,
            log_prior,
            log_present,
            log_absent,
            absent_total,
        })
    }

    /// Posterior probability of abuse given which vocabulary tokens occur in
    /// `tokens`; unknown tokens are ignored.
    pub fn posterior(&self, tokens: &[String]) -> f64 {
        let mut score = [
            self.log_prior[0] + self.absent_total[0],
            self.log_prior[1] + self.absent_total[1],
        ];
        let present: BTreeSet<usize> = tokens
            .iter()
            .filter_map(|t| self.vocabulary.get(t).copied())
            .collect();
        for i in present {
            for (c, s) in score.iter_mut().enumerate() {
                *s += self.log_present[i][c] - self.log_absent[i][c];
            }
        }
        // P(abuse) = 1 / (1 + exp(s1 - s0))
        let d = score[1] - score[0];
        if d >= 0.0 {
            let e = (-d).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + d.exp())
        }
    }
}
