//! Shortest-path measures. Weighted variants use edge length `1/w`, so
//! heavier interaction means a shorter distance.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use super::view::{Direction, View};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceProfile<T> {
    /// `(r - 1) / sum of distances` over the `r` vertices reachable from each
    /// vertex (itself included); 0 when nothing else is reachable.
    pub closeness: Vec<T>,
    /// Largest distance to a reachable vertex.
    pub eccentricity: Vec<T>,
    /// Max / min eccentricity over vertices reaching at least one other.
    pub diameter: T,
    pub radius: T,
    /// Mean distance over ordered reachable pairs.
    pub average_path_length: T,
}

struct Queued<T> {
    dist: T,
    vertex: usize,
}

impl<T: Real> PartialEq for Queued<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Queued<T> {}

impl<T: Real> PartialOrd for Queued<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Queued<T> {
    // Reversed: BinaryHeap pops the smallest distance, then smallest vertex.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

fn edge_length<T: Real>(w: T, weighted: bool) -> T {
    if weighted {
        T::one() / w
    } else {
        T::one()
    }
}

/// Single-source distances following edges in direction `dir`.
pub fn distances_from<T: Real>(
    g: &View<T>,
    source: usize,
    weighted: bool,
    dir: Direction,
) -> Vec<Option<T>> {
    let n = g.vertex_count();
    let mut dist: Vec<Option<T>> = vec![None; n];
    dist[source] = Some(T::zero());
    if !weighted {
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let next = dist[v].expect("queued vertices have distances") + T::one();
            for (w, _) in g.neighbors(v, dir) {
                if dist[w].is_none() {
                    dist[w] = Some(next);
                    queue.push_back(w);
                }
            }
        }
        return dist;
    }
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::from([Queued {
        dist: T::zero(),
        vertex: source,
    }]);
    while let Some(Queued { dist: d, vertex: v }) = heap.pop() {
        if settled[v] {
            continue;
        }
        settled[v] = true;
        for (w, weight) in g.neighbors(v, dir) {
            let alt = d + edge_length(weight, true);
            if dist[w].is_none_or(|cur| alt < cur) {
                dist[w] = Some(alt);
                heap.push(Queued {
                    dist: alt,
                    vertex: w,
                });
            }
        }
    }
    dist
}

pub fn closeness_eccentricity<T: Real>(
    g: &View<T>,
    weighted: bool,
    dir: Direction,
) -> DistanceProfile<T> {
    let n = g.vertex_count();
    let mut closeness = vec![T::zero(); n];
    let mut eccentricity = vec![T::zero(); n];
    let mut diameter: Option<T> = None;
    let mut radius: Option<T> = None;
    let mut total = T::zero();
    let mut pairs = 0usize;
    for v in 0..n {
        let dist = distances_from(g, v, weighted, dir);
        let mut reached = 0usize;
        let mut sum = T::zero();
        let mut ecc = T::zero();
        for d in dist
            .iter()
            .enumerate()
            .filter(|&(u, _)| u != v)
            .filter_map(|(_, d)| *d)
        {
            reached += 1;
            sum += d;
            ecc = ecc.max(d);
        }
        if reached > 0 {
            closeness[v] = T::of_usize(reached) / sum;
            eccentricity[v] = ecc;
            diameter = Some(diameter.map_or(ecc, |x| x.max(ecc)));
            radius = Some(radius.map_or(ecc, |x| x.min(ecc)));
            total += sum;
            pairs += reached;
        }
    }
    DistanceProfile {
        closeness,
        eccentricity,
        diameter: diameter.unwrap_or(T::zero()),
        radius: radius.unwrap_or(T::zero()),
        average_path_length: if pairs > 0 {
            total / T::of_usize(pairs)
        } else {
            T::zero()
        },
    }
}

/// Shortest-path betweenness (Brandes), ties sharing credit fractionally.
/// Directed views count ordered pairs, undirected views unordered pairs.
/// Path lengths within a small relative tolerance count as ties.
pub fn betweenness<T: Real>(g: &View<T>, weighted: bool) -> Vec<T> {
    let n = g.vertex_count();
    let mut centrality = vec![T::zero(); n];
    let mut dist: Vec<Option<T>> = vec![None; n];
    let mut sigma = vec![T::zero(); n];
    let mut delta = vec![T::zero(); n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut settled = vec![false; n];

    for s in 0..n {
        dist.fill(None);
        sigma.fill(T::zero());
        delta.fill(T::zero());
        settled.fill(false);
        for p in &mut preds {
            p.clear();
        }
        order.clear();
        dist[s] = Some(T::zero());
        sigma[s] = T::one();

        if weighted {
            let mut heap = BinaryHeap::from([Queued {
                dist: T::zero(),
                vertex: s,
            }]);
            while let Some(Queued { dist: d, vertex: v }) = heap.pop() {
                if settled[v] || dist[v] != Some(d) {
                    continue;
                }
                settled[v] = true;
                order.push(v);
                for (w, weight) in g.neighbors(v, Direction::Out) {
                    if settled[w] {
                        continue;
                    }
                    let alt = d + edge_length(weight, true);
                    let eps = T::tie_eps(alt);
                    match dist[w] {
                        Some(cur) if (alt - cur).abs() <= eps => {
                            let sv = sigma[v];
                            sigma[w] += sv;
                            preds[w].push(v);
                        }
                        Some(cur) if alt > cur => {}
                        _ => {
                            dist[w] = Some(alt);
                            sigma[w] = sigma[v];
                            preds[w].clear();
                            preds[w].push(v);
                            heap.push(Queued {
                                dist: alt,
                                vertex: w,
                            });
                        }
                    }
                }
            }
        } else {
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                let next = dist[v].expect("queued vertices have distances") + T::one();
                for (w, _) in g.neighbors(v, Direction::Out) {
                    if dist[w].is_none() {
                        dist[w] = Some(next);
                        queue.push_back(w);
                    }
                    if dist[w] == Some(next) {
                        let sv = sigma[v];
                        sigma[w] += sv;
                        preds[w].push(v);
                    }
                }
            }
        }

        for &w in order.iter().rev() {
            let coeff = (T::one() + delta[w]) / sigma[w];
            for &v in &preds[w] {
                let add = sigma[v] * coeff;
                delta[v] += add;
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }
    if !g.is_directed() {
        let half = T::of(0.5);
        for c in &mut centrality {
            *c *= half;
        }
    }
    centrality
}
