use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Abuse,
    NonAbuse,
}

impl Class {
    pub fn of(abuse: bool) -> Class {
        if abuse {
            Class::Abuse
        } else {
            Class::NonAbuse
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassTable {
    pub documents: usize,
    pub df: BTreeMap<String, usize>,
}

impl ClassTable {
    /// `ln((1 + N) / (1 + df)) + 1`
    pub fn idf(&self, token: &str) -> f64 {
        let df = self.df.get(token).copied().unwrap_or(0);
        ((1 + self.documents) as f64 / (1 + df) as f64).ln() + 1.0
    }
}

/// Per-class document frequencies of a training set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TfIdfModel {
    pub abuse: ClassTable,
    pub non_abuse: ClassTable,
}

impl TfIdfModel {
    pub fn fit<D: AsRef<[String]>>(documents: &[D], labels: &[bool]) -> Result<Self> {
        if documents.len() != labels.len() {
            return Err(Error::Input(format!(
                "{} documents but {} labels",
                documents.len(),
                labels.len()
            )));
        }
        let mut abuse = ClassTable::default();
        let mut non_abuse = ClassTable::default();
        for (doc, &label) in documents.iter().zip(labels) {
            let table = if label { &mut abuse } else { &mut non_abuse };
            table.documents += 1;
            let distinct: BTreeSet<&String> = doc.as_ref().iter().collect();
            for t in distinct {
                *table.df.entry(t.clone()).or_insert(0) += 1;
            }
        }
        if abuse.documents == 0 || non_abuse.documents == 0 {
            return Err(Error::Fit("tf-idf needs documents of both classes".into()));
        }
        Ok(TfIdfModel { abuse, non_abuse })
    }

    pub fn table(&self, class: Class) -> &ClassTable {
        match class {
            Class::Abuse => &self.abuse,
            Class::NonAbuse => &self.non_abuse,
        }
    }

    /// Sum over the distinct tokens of `tf × idf` for `class`.
    pub fn score(&self, tokens: &[String], class: Class) -> f64 {
        let table = self.table(class);
        let mut tf: HashMap<&str, usize> = HashMap::new();
        for t in tokens {
            *tf.entry(t).or_insert(0) += 1;
        }
        let mut terms: Vec<(&str, usize)> = tf.into_iter().collect();
        terms.sort_unstable();
        terms
            .into_iter()
            .map(|(t, n)| n as f64 * table.idf(t))
            .sum()
    }
}
