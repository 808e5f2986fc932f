use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Per-feature standardization with training-set statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaler<T> {
    pub mean: Vec<T>,
    /// Population standard deviation; 0 marks a constant feature.
    pub std: Vec<T>,
}

impl<T: Real> Scaler<T> {
    pub fn fit<R: AsRef<[T]>>(rows: &[R]) -> Self {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let n = T::of_usize(rows.len().max(1));
        let mut mean = vec![T::zero(); d];
        for r in rows {
            for (m, &x) in mean.iter_mut().zip(r.as_ref()) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= n;
        }
        let mut var = vec![T::zero(); d];
        for r in rows {
            for ((v, &x), &m) in var.iter_mut().zip(r.as_ref()).zip(&mean) {
                *v += (x - m) * (x - m);
            }
        }
        let std = var
            .into_iter()
            .zip(&mean)
            .map(|(v, &m)| {
                let s = (v / n).sqrt();
                // Rounding noise on a constant column is not variance.
                if s <= T::epsilon() * T::of(16.0) * m.abs() {
                    T::zero()
                } else {
                    s
                }
            })
            .collect();
        Scaler { mean, std }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, row: &[T]) -> Vec<T> {
        row.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(&x, (&m, &s))| if s > T::zero() { (x - m) / s } else { T::zero() })
            .collect()
    }
}
