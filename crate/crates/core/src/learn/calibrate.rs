//! Platt scaling: `P(abuse | f) = 1 / (1 + exp(A f + B))`, fitted by
//! Newton's method with backtracking on the regularized log-likelihood.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_ITER: usize = 100;
const MIN_STEP: f64 = 1e-10;
const SIGMA: f64 = 1e-12;
const GRADIENT_TOLERANCE: f64 = 1e-10;
/// Largest slope accepted; steeper fits are clamped so the probability
/// stays strictly increasing in the margin.
const MAX_A: f64 = -1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibrator {
    pub a: f64,
    pub b: f64,
}

fn log1pexp_neg(x: f64) -> f64 {
    // ln(1 + exp(-x)) for x ≥ 0
    (-x).exp().ln_1p()
}

/// Negative log-likelihood of smoothed targets `t` under parameters (a, b).
fn loss(f: &[f64], t: &[f64], a: f64, b: f64) -> f64 {
    f.iter()
        .zip(t)
        .map(|(&fi, &ti)| {
            let z = fi * a + b;
            if z >= 0.0 {
                ti * z + log1pexp_neg(z)
            } else {
                (ti - 1.0) * z + log1pexp_neg(-z)
            }
        })
        .sum()
}

/// `(p, 1 - p)` where `p = 1 / (1 + exp(z))`, stable for any `z`.
fn probs(z: f64) -> (f64, f64) {
    if z >= 0.0 {
        let e = (-z).exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    } else {
        let e = z.exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    }
}

fn newton(f: &[f64], t: &[f64], mut a: f64, mut b: f64, fix_a: bool) -> (f64, f64) {
    let mut fval = loss(f, t, a, b);
    for _ in 0..MAX_ITER {
        let (mut h11, mut h22, mut h21, mut g1, mut g2) = (SIGMA, SIGMA, 0.0, 0.0, 0.0);
        for (&fi, &ti) in f.iter().zip(t) {
            let (p, q) = probs(fi * a + b);
            let d2 = p * q;
            h11 += fi * fi * d2;
            h22 += d2;
            h21 += fi * d2;
            let d1 = ti - p;
            g1 += fi * d1;
            g2 += d1;
        }
        let (da, db) = if fix_a {
            if g2.abs() < GRADIENT_TOLERANCE {
                break;
            }
            (0.0, -g2 / h22)
        } else {
            if g1.abs() < GRADIENT_TOLERANCE && g2.abs() < GRADIENT_TOLERANCE {
                break;
            }
            let det = h11 * h22 - h21 * h21;
            (-(h22 * g1 - h21 * g2) / det, -(-h21 * g1 + h11 * g2) / det)
        };
        let gd = if fix_a { g2 * db } else { g1 * da + g2 * db };
        let mut step = 1.0;
        while step >= MIN_STEP {
            let (na, nb) = (a + step * da, b + step * db);
            let nf = loss(f, t, na, nb);
            if nf < fval + 1e-4 * step * gd {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if step < MIN_STEP {
            break;
        }
    }
    (a, b)
}

impl Calibrator {
    /// Fits (A, B) to decision values `f` and labels, with Platt's
    /// prior-smoothed targets.
    pub fn fit(f: &[f64], labels: &[bool]) -> Result<Self> {
        if f.len() != labels.len() {
            return Err(Error::Input(format!(
                "{} decision values but {} labels",
                f.len(),
                labels.len()
            )));
        }
        if f.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("non-finite decision value".into()));
        }
        let pos = labels.iter().filter(|&&l| l).count() as f64;
        let neg = labels.len() as f64 - pos;
        if pos == 0.0 || neg == 0.0 {
            return Err(Error::Fit("calibration needs both classes".into()));
        }
        let hi = (pos + 1.0) / (pos + 2.0);
        let lo = 1.0 / (neg + 2.0);
        let t: Vec<f64> = labels.iter().map(|&l| if l { hi } else { lo }).collect();
        let b0 = ((neg + 1.0) / (pos + 1.0)).ln();
        let (a, b) = newton(f, &t, 0.0, b0, false);
        if a <= MAX_A {
            return Ok(Calibrator { a, b });
        }
        let (a, b) = newton(f, &t, MAX_A, b0, true);
        Ok(Calibrator { a, b })
    }

    pub fn probability(&self, f: f64) -> f64 {
        probs(self.a * f + self.b).0
    }
}
