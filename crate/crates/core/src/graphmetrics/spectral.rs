use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::view::View;
use crate::scalar::Real;

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const POWER_TOLERANCE: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 200;

/// PageRank by power iteration. Transition probabilities follow out-edge
/// weights (or are uniform over out-edges when `weighted` is false);
/// dangling vertices spread their mass uniformly. Stops when the L1 change
/// drops below 1e-10 or after 200 iterations.
pub fn pagerank<T: Real>(g: &View<T>, weighted: bool, damping: T) -> Vec<T> {
    let n = g.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    let nf = T::of_usize(n);
    let weight = |w: T| if weighted { w } else { T::one() };
    let out_total: Vec<T> = (0..n)
        .map(|v| g.successors(v).iter().map(|&(_, w)| weight(w)).sum())
        .collect();
    let tol = T::of(POWER_TOLERANCE);
    let mut rank = vec![T::one() / nf; n];
    let mut next = vec![T::zero(); n];
    for _ in 0..POWER_MAX_ITER {
        let dangling: T = (0..n)
            .filter(|&v| out_total[v] == T::zero())
            .map(|v| rank[v])
            .sum();
        let base = (T::one() - damping) / nf + damping * dangling / nf;
        next.fill(base);
        for (u, &r) in rank.iter().enumerate() {
            if out_total[u] > T::zero() {
                let share = damping * r / out_total[u];
                for &(v, w) in g.successors(u) {
                    next[v] += share * weight(w);
                }
            }
        }
        let total: T = next.iter().copied().sum();
        for x in &mut next {
            *x /= total;
        }
        let change: T = rank.iter().zip(&next).map(|(a, b)| (*a - *b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if change < tol {
            break;
        }
    }
    rank
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hits<T> {
    pub hub: Vec<T>,
    pub authority: Vec<T>,
}

fn normalize<T: Real>(v: &mut [T]) -> bool {
    let norm = v.iter().map(|x| *x * *x).sum::<T>().sqrt();
    if norm > T::zero() {
        for x in v.iter_mut() {
            *x /= norm;
        }
        true
    } else {
        false
    }
}

/// Hub and authority scores: alternating `a = Aᵀh`, `h = A a` from `h = 1`,
/// each L2-normalized, until both change by less than 1e-10 (L1) or 200
/// rounds. When the two leading eigenvalues of `AᵀA` are too close for
/// that, the authority vector is projected onto the dominant eigenspace
/// instead, which is where the iteration converges. A graph without edges
/// gives all zeros.
pub fn hits<T: Real>(g: &View<T>, weighted: bool) -> Hits<T> {
    let n = g.vertex_count();
    let weight = |w: T| if weighted { w } else { T::one() };
    let zeros = || Hits {
        hub: vec![T::zero(); n],
        authority: vec![T::zero(); n],
    };
    let hub_of = |a: &[T]| {
        let mut h = vec![T::zero(); n];
        for (u, hu) in h.iter_mut().enumerate() {
            for &(v, w) in g.successors(u) {
                *hu += weight(w) * a[v];
            }
        }
        h
    };
    let tol = T::of(POWER_TOLERANCE);
    let mut hub = vec![T::one(); n];
    let mut authority = vec![T::zero(); n];
    let mut converged = false;
    for _ in 0..POWER_MAX_ITER {
        let mut a = vec![T::zero(); n];
        for (u, &h) in hub.iter().enumerate() {
            for &(v, w) in g.successors(u) {
                a[v] += weight(w) * h;
            }
        }
        if !normalize(&mut a) {
            return zeros();
        }
        let mut h = hub_of(&a);
        if !normalize(&mut h) {
            return zeros();
        }
        let change =
            |x: &[T], y: &[T]| -> T { x.iter().zip(y).map(|(p, q)| (*p - *q).abs()).sum() };
        converged = change(&a, &authority) < tol && change(&h, &hub) < tol;
        authority = a;
        hub = h;
        if converged {
            break;
        }
    }
    if !converged {
        authority = dominant_projection(g, weighted, &authority);
        hub = hub_of(&authority);
        normalize(&mut hub);
    }
    Hits { hub, authority }
}

/// Normalized projection of `start` onto the eigenspace of the largest
/// eigenvalue of `AᵀA`.
fn dominant_projection<T: Real>(g: &View<T>, weighted: bool, start: &[T]) -> Vec<T> {
    let n = g.vertex_count();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for &(u, v, w) in g.edges() {
        a[(u, v)] = if weighted { w.as_f64() } else { 1.0 };
    }
    let eig = SymmetricEigen::new(a.transpose() * &a);
    let top = eig.eigenvalues.max();
    let x = DVector::from_iterator(n, start.iter().map(|s| s.as_f64()));
    let mut proj = DVector::zeros(n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda >= top * (1.0 - 1e-9) {
            let v = eig.eigenvectors.column(k);
            proj += v * v.dot(&x);
        }
    }
    let mut out: Vec<T> = proj.iter().map(|&p| T::of(p)).collect();
    normalize(&mut out);
    out
}
