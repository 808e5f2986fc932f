//! Reference checks for the SVM, naive Bayes and Platt scaling.

use convabuse::learn::{Calibrator, LinearSvm, NbModel, SvmParams};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[derive(Clone, Debug)]
pub struct Problem {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<bool>,
    pub c: f64,
}

fn sign(l: bool) -> f64 {
    if l {
        1.0
    } else {
        -1.0
    }
}

/// Maximum of the dual `Σα − ½ αᵀQα` over `0 ≤ α ≤ C`, `yᵀα = 0`, found by
/// trying every assignment of each `α_i` to 0, C or free and solving the
/// stationarity system on the free ones.
pub fn dual_optimum(p: &Problem) -> f64 {
    let n = p.rows.len();
    let y: Vec<f64> = p.labels.iter().map(|&l| sign(l)).collect();
    let q = DMatrix::from_fn(n, n, |i, j| {
        y[i] * y[j] * p.rows[i].iter().zip(&p.rows[j]).map(|(a, b)| a * b).sum::<f64>()
    });
    let dual = |a: &DVector<f64>| a.sum() - 0.5 * a.dot(&(&q * a));
    let mut best = f64::NEG_INFINITY;
    let mut state = vec![0u8; n];
    loop {
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut alpha = DVector::from_fn(n, |i, _| if state[i] == 1 { p.c } else { 0.0 });
        let fixed_balance: f64 = (0..n).filter(|&i| state[i] != 2).map(|i| y[i] * alpha[i]).sum();
        let feasible = if free.is_empty() {
            fixed_balance.abs() < 1e-12
        } else {
            let m = free.len();
            let qa = &q * &alpha;
            let mut k = DMatrix::zeros(m + 1, m + 1);
            let mut rhs = DVector::zeros(m + 1);
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    k[(r, s)] = q[(i, j)];
                }
                k[(r, m)] = y[i];
                k[(m, r)] = y[i];
                rhs[r] = 1.0 - qa[i];
            }
            rhs[m] = -fixed_balance;
            let sol = k.clone().svd(true, true).solve(&rhs, 1e-12).expect("svd solve");
            let consistent = (&k * &sol - &rhs).amax() < 1e-9;
            for (r, &i) in free.iter().enumerate() {
                alpha[i] = sol[r];
            }
            consistent && free.iter().all(|&i| alpha[i] >= -1e-12 && alpha[i] <= p.c + 1e-12)
        };
        if feasible {
            best = best.max(dual(&alpha));
        }
        let mut i = 0;
        while i < n && state[i] == 2 {
            state[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        state[i] += 1;
    }
}

/// Five small problems: separable, overlapping, contradictory duplicates,
/// a single feature, and a random cloud.
pub fn toy_problems() -> Vec<Problem> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cloud = |n: usize, d: usize, shift: f64| {
        let labels: Vec<bool> = (0..n).map(|i| i % 3 != 0).collect();
        let rows = labels
            .iter()
            .map(|&l| (0..d).map(|_| rng.random_range(-1.0..1.0) + sign(l) * shift).collect())
            .collect();
        (rows, labels)
    };
    let (r4, l4) = cloud(7, 3, 0.2);
    vec![
        Problem {
            rows: vec![vec![2.0, 1.0], vec![1.5, 2.0], vec![-1.0, -1.0], vec![-2.0, 0.5]],
            labels: vec![true, true, false, false],
            c: 1.0,
        },
        Problem {
            rows: vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5], vec![0.2, 0.9], vec![0.9, 0.1], vec![0.4, 0.4]],
            labels: vec![true, false, true, false, false, true],
            c: 2.0,
        },
        Problem {
            rows: vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![-1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 0.5]],
            labels: vec![true, false, false, false, true],
            c: 0.5,
        },
        Problem {
            rows: vec![vec![-2.0], vec![-1.0], vec![0.0], vec![0.5], vec![1.0], vec![3.0]],
            labels: vec![false, false, true, false, true, true],
            c: 1.0,
        },
        Problem { rows: r4, labels: l4, c: 10.0 },
    ]
}

/// `|primal − dual optimum|` for each toy problem.
pub fn svm_gaps() -> Vec<f64> {
    toy_problems()
        .iter()
        .map(|p| {
            let params = SvmParams { c: p.c, ..SvmParams::default() };
            let svm = LinearSvm::<f64>::fit(&p.rows, &p.labels, &params).expect("fit");
            (svm.objective(&p.rows, &p.labels) - dual_optimum(p)).abs()
        })
        .collect()
}

/// Smallest norm of a subgradient of the primal at the returned model,
/// choosing the multipliers of margin-one points from the dual solution.
pub fn hinge_subgradient_norm(p: &Problem) -> f64 {
    let params = SvmParams { c: p.c, ..SvmParams::default() };
    let (svm, alpha) = LinearSvm::<f64>::fit_with_dual(&p.rows, &p.labels, &params).expect("fit");
    let d = p.rows[0].len();
    let mut g = svm.weights.clone();
    let mut gb = 0.0;
    for ((x, &l), &a) in p.rows.iter().zip(&p.labels).zip(&alpha) {
        let y = sign(l);
        let margin = y * svm.decision(x);
        let theta = if margin < 1.0 - 1e-6 {
            1.0
        } else if margin > 1.0 + 1e-6 {
            0.0
        } else {
            (a / p.c).clamp(0.0, 1.0)
        };
        for k in 0..d {
            g[k] -= p.c * theta * y * x[k];
        }
        gb -= p.c * theta * y;
    }
    (g.iter().map(|v| v * v).sum::<f64>() + gb * gb).sqrt()
}

/// A seeded overlapping problem of 200 points in 5 dimensions.
pub fn noisy_problem() -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let labels: Vec<bool> = (0..200).map(|i| i % 2 == 0).collect();
    let rows = labels
        .iter()
        .map(|&l| (0..5).map(|k| normal.sample(&mut rng) + if k < 2 { 0.7 * sign(l) } else { 0.0 }).collect())
        .collect();
    Problem { rows, labels, c: 1.0 }
}

/// Posterior of "bad" under the four-document corpus; by hand, with Laplace
/// smoothing, 27/128 against 3/128 gives 0.9.
pub fn nb_toy_posterior() -> f64 {
    let doc = |s: &str| s.split(' ').map(String::from).collect::<Vec<_>>();
    let docs = [doc("bad idiot"), doc("bad"), doc("good day"), doc("day")];
    let nb = NbModel::fit(&docs, &[true, true, false, false]).expect("fit");
    nb.posterior(&doc("bad"))
}

pub const PLATT_A: f64 = -1.5;
pub const PLATT_B: f64 = 0.5;

/// Calibrator fitted to labels drawn from a known logistic model.
pub fn platt_recovery() -> Calibrator {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let normal = Normal::new(0.0, 2.0).unwrap();
    let f: Vec<f64> = (0..20_000).map(|_| normal.sample(&mut rng)).collect();
    let labels: Vec<bool> = f
        .iter()
        .map(|&x| rng.random::<f64>() < 1.0 / (1.0 + (PLATT_A * x + PLATT_B).exp()))
        .collect();
    Calibrator::fit(&f, &labels).expect("fit")
}

/// Relative errors of the recovered `(A, B)`.
pub fn platt_errors() -> (f64, f64) {
    let c = platt_recovery();
    (((c.a - PLATT_A) / PLATT_A).abs(), ((c.b - PLATT_B) / PLATT_B).abs())
}
