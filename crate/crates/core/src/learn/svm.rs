//! Soft-margin linear SVM. The dual QP is solved by a primal-dual
//! interior-point method (Mehrotra predictor-corrector); with a linear
//! kernel each Newton system reduces, by the Woodbury identity, to a dense
//! system of the feature dimension.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmParams {
    pub c: f64,
    /// Stop once the duality gap relative to the objective drops below
    /// this.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            tolerance: 1e-10,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm<T> {
    pub weights: Vec<T>,
    pub bias: T,
    pub c: T,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Cholesky factor of an SPD matrix, with diagonal jitter when rounding
/// makes it numerically indefinite.
fn factorize(m: DMatrix<f64>) -> Cholesky<f64, Dyn> {
    let scale = m.diagonal().amax().max(1.0);
    let mut jitter = 1e-14 * scale;
    let mut m = m;
    loop {
        match Cholesky::new(m.clone()) {
            Some(c) => return c,
            None => {
                for i in 0..m.nrows() {
                    m[(i, i)] += jitter;
                }
                jitter *= 10.0;
            }
        }
    }
}

/// `(Q + diag(D))⁻¹` for `Q = Z Zᵀ`, factored in whichever of the sample
/// or feature dimension is smaller.
enum Factor {
    Feature { dinv: DVector<f64>, chol: Cholesky<f64, Dyn> },
    Sample { chol: Cholesky<f64, Dyn> },
}

struct Dual {
    /// Rows `z_i = y_i x_i`.
    z: DMatrix<f64>,
    gram: Option<DMatrix<f64>>,
}

impl Dual {
    fn factor(&self, diag: &DVector<f64>) -> Factor {
        match &self.gram {
            Some(q) => Factor::Sample {
                chol: factorize(q + DMatrix::from_diagonal(diag)),
            },
            None => {
                let dinv = diag.map(|x| 1.0 / x);
                let root = dinv.map(f64::sqrt);
                let mut scaled = self.z.clone();
                for mut col in scaled.column_iter_mut() {
                    col.component_mul_assign(&root);
                }
                let mut m = scaled.transpose() * &scaled;
                for i in 0..m.nrows() {
                    m[(i, i)] += 1.0;
                }
                Factor::Feature {
                    dinv,
                    chol: factorize(m),
                }
            }
        }
    }

    fn solve(&self, f: &Factor, g: &DVector<f64>) -> DVector<f64> {
        match f {
            Factor::Sample { chol } => chol.solve(g),
            Factor::Feature { dinv, chol } => {
                let dg = g.component_mul(dinv);
                let u = chol.solve(&self.z.tr_mul(&dg));
                &dg - (&self.z * u).component_mul(dinv)
            }
        }
    }
}

/// Largest step in (0, 1] keeping `x + t dx ≥ 0`.
fn max_step(x: &[f64], dx: &[f64]) -> f64 {
    x.iter()
        .zip(dx)
        .filter(|(_, &d)| d < 0.0)
        .map(|(&v, &d)| -v / d)
        .fold(1.0, f64::min)
}

/// Solves `min ½αᵀQα − Σα` subject to `0 ≤ α ≤ C`, `yᵀα = 0` with
/// `Q = Z Zᵀ`. Returns `α` and the multiplier of the equality constraint,
/// which is `−b`.
fn solve_dual(z: DMatrix<f64>, y: &DVector<f64>, c: f64, tol: f64, max_iter: usize) -> (DVector<f64>, f64) {
    let (n, d) = z.shape();
    let gram = (n < d).then(|| &z * z.transpose());
    let sys = Dual { z, gram };
    let nf = n as f64;
    let mut alpha = DVector::from_element(n, c / 2.0);
    let mut zl = DVector::from_element(n, 1.0);
    let mut ru = DVector::from_element(n, 1.0);
    let mut beta = 0.0;
    let finite = |v: &DVector<f64>| v.iter().all(|x| x.is_finite());
    for _ in 0..max_iter {
        let qa = &sys.z * sys.z.tr_mul(&alpha);
        let s = alpha.map(|a| c - a);
        let rd = &qa - DVector::from_element(n, 1.0) - y * beta - &zl + &ru;
        let rp = y.dot(&alpha);
        let comp = alpha.dot(&zl) + s.dot(&ru);
        let mu = comp / (2.0 * nf);
        let dual_obj = alpha.sum() - 0.5 * alpha.dot(&qa);
        // Residuals bottom out at the rounding level of `Qα`.
        if comp <= tol * (1.0 + dual_obj.abs())
            && rd.amax() <= 1e-7 * (1.0 + qa.amax())
            && rp.abs() <= 1e-9 * c * nf.sqrt()
        {
            break;
        }

        let diag = zl.component_div(&alpha) + ru.component_div(&s);
        let f = sys.factor(&diag);
        let hy = sys.solve(&f, y);
        let yhy = y.dot(&hy);
        let direction = |c1: &DVector<f64>, c2: &DVector<f64>| {
            let g = -&rd + c1.component_div(&alpha) - c2.component_div(&s);
            let hg = sys.solve(&f, &g);
            let db = (-rp - y.dot(&hg)) / yhy;
            let da = hg + &hy * db;
            let dz = (c1 - zl.component_mul(&da)).component_div(&alpha);
            let dr = (c2 + ru.component_mul(&da)).component_div(&s);
            (da, db, dz, dr)
        };
        let step_of = |da: &DVector<f64>, dz: &DVector<f64>, dr: &DVector<f64>| {
            max_step(alpha.as_slice(), da.as_slice())
                .min(max_step(s.as_slice(), (-da).as_slice()))
                .min(max_step(zl.as_slice(), dz.as_slice()))
                .min(max_step(ru.as_slice(), dr.as_slice()))
        };

        // Predictor.
        let c1 = -alpha.component_mul(&zl);
        let c2 = -s.component_mul(&ru);
        let (da, _, dz, dr) = direction(&c1, &c2);
        let t = step_of(&da, &dz, &dr);
        let comp_aff = (&alpha + &da * t).dot(&(&zl + &dz * t)) + (&s - &da * t).dot(&(&ru + &dr * t));
        let sigma = (comp_aff / comp).powi(3).min(1.0);

        // Corrector.
        let target = DVector::from_element(n, sigma * mu);
        let c1 = &target - alpha.component_mul(&zl) - da.component_mul(&dz);
        let c2 = &target - s.component_mul(&ru) + da.component_mul(&dr);
        let (da, db, dz, dr) = direction(&c1, &c2);
        let t = (0.995 * step_of(&da, &dz, &dr)).min(1.0);
        if !(t > 0.0 && db.is_finite() && finite(&da) && finite(&dz) && finite(&dr)) {
            break;
        }
        alpha += da * t;
        zl += dz * t;
        ru += dr * t;
        beta += t * db;
    }
    (alpha, beta)
}

/// Bias minimizing `Σ max(0, 1 − y_i (m_i + b))` for fixed margins
/// `m_i = w·x_i`; the smallest minimizer when several exist.
fn best_bias(m: &[f64], y: &[f64], start: f64) -> f64 {
    // Each term has its kink at b = y_i − m_i and contributes slope −1 left
    // of it (positives) or +1 right of it (negatives); crossing any kink
    // raises the total slope by one.
    let mut kinks: Vec<f64> = m.iter().zip(y).map(|(&mi, &yi)| yi - mi).collect();
    kinks.sort_by(f64::total_cmp);
    let mut slope = -(y.iter().filter(|&&v| v > 0.0).count() as f64);
    let loss = |b: f64| -> f64 {
        m.iter()
            .zip(y)
            .map(|(&mi, &yi)| (1.0 - yi * (mi + b)).max(0.0))
            .sum()
    };
    let mut best = start;
    for &k in &kinks {
        slope += 1.0;
        if slope >= 0.0 {
            if loss(k) < loss(start) {
                best = k;
            }
            break;
        }
    }
    best
}

impl<T: Real> LinearSvm<T> {
    /// Trains on `rows` with `labels` (`true` = abuse = +1).
    pub fn fit<R: AsRef<[T]>>(rows: &[R], labels: &[bool], params: &SvmParams) -> Result<Self> {
        Self::fit_with_dual(rows, labels, params).map(|(m, _)| m)
    }

    /// Like `fit`, also returning the dual coefficients `α`.
    pub fn fit_with_dual<R: AsRef<[T]>>(rows: &[R], labels: &[bool], params: &SvmParams) -> Result<(Self, Vec<T>)> {
        let n = rows.len();
        if labels.len() != n {
            return Err(Error::Input(format!("{n} rows but {} labels", labels.len())));
        }
        if !(params.c > 0.0 && params.c.is_finite()) {
            return Err(Error::Config(format!("C must be positive, got {}", params.c)));
        }
        if !labels.iter().any(|&l| l) || labels.iter().all(|&l| l) {
            return Err(Error::Fit("SVM training needs both classes".into()));
        }
        let d = rows[0].as_ref().len();
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != d {
                return Err(Error::Input(format!("row {i} has {} features, expected {d}", r.len())));
            }
            if r.iter().any(|x| !x.is_finite()) {
                return Err(Error::Input(format!("row {i} has a non-finite feature")));
            }
        }
        let c = params.c;
        let y = DVector::from_iterator(n, labels.iter().map(|&l| if l { 1.0 } else { -1.0 }));
        let x = DMatrix::from_fn(n, d, |i, k| rows[i].as_ref()[k].as_f64());
        let (alpha, beta) = if d == 0 {
            (DVector::zeros(n), 0.0)
        } else {
            let mut z = x.clone();
            for mut col in z.column_iter_mut() {
                col.component_mul_assign(&y);
            }
            solve_dual(z, &y, c, params.tolerance, params.max_iter)
        };
        let w = x.tr_mul(&alpha.component_mul(&y));
        let margins = &x * &w;
        let b = best_bias(margins.as_slice(), y.as_slice(), -beta);
        Ok((
            LinearSvm {
                weights: w.iter().map(|&v| T::of(v)).collect(),
                bias: T::of(b),
                c: T::of(c),
            },
            alpha.iter().map(|&v| T::of(v)).collect(),
        ))
    }

    pub fn decision(&self, row: &[T]) -> T {
        dot(&self.weights, row) + self.bias
    }

    /// `½‖w‖² + C Σ max(0, 1 − y (w·x + b))`
    pub fn objective<R: AsRef<[T]>>(&self, rows: &[R], labels: &[bool]) -> T {
        let hinge: T = rows
            .iter()
            .zip(labels)
            .map(|(r, &l)| {
                let y = if l { T::one() } else { -T::one() };
                (T::one() - y * self.decision(r.as_ref())).max(T::zero())
            })
            .sum();
        T::of(0.5) * dot(&self.weights, &self.weights) + self.c * hinge
    }
}
