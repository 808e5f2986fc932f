use super::view::View;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Counts<T> {
    pub vertices: usize,
    pub edges: usize,
    pub density: T,
    /// Fraction of directed edges whose reverse edge exists; 0 without
    /// edges or on undirected views.
    pub reciprocity: T,
}

pub fn reciprocity_density_counts<T: Real>(g: &View<T>) -> Counts<T> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let pairs = if g.is_directed() {
        n * n.saturating_sub(1)
    } else {
        n * n.saturating_sub(1) / 2
    };
    let density = if n <= 1 {
        T::zero()
    } else {
        T::of_usize(m) / T::of_usize(pairs)
    };
    let reciprocity = if g.is_directed() && m > 0 {
        let mutual = g
            .edges()
            .iter()
            .filter(|&&(u, v, _)| {
                g.successors(v)
                    .binary_search_by_key(&u, |&(x, _)| x)
                    .is_ok()
            })
            .count();
        T::of_usize(mutual) / T::of_usize(m)
    } else {
        T::zero()
    };
    Counts {
        vertices: n,
        edges: m,
        density,
        reciprocity,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Clustering<T> {
    /// Local clustering coefficient; 0 for vertices of degree < 2.
    pub local: Vec<T>,
    /// `3 × triangles / connected triples`, always unweighted.
    pub transitivity: T,
}

/// Local clustering and global transitivity on an undirected view. The
/// weighted local coefficient averages the geometric mean of the three
/// triangle weights, each scaled by the largest weight in the graph.
pub fn clustering_transitivity<T: Real>(g: &View<T>, weighted: bool) -> Clustering<T> {
    let n = g.vertex_count();
    let max_w = g
        .edges()
        .iter()
        .map(|e| e.2)
        .fold(T::zero(), |a, b| a.max(b));
    let third = T::one() / T::of(3.0);
    let weight_of = |u: usize, v: usize| -> Option<T> {
        g.successors(u)
            .binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| g.successors(u)[i].1)
    };

    let mut local = vec![T::zero(); n];
    let mut triangles = 0usize;
    let mut triples = 0usize;
    for (v, slot) in local.iter_mut().enumerate() {
        let nbrs = g.successors(v);
        let k = nbrs.len();
        if k < 2 {
            continue;
        }
        triples += k * (k - 1) / 2;
        let mut closed = 0usize;
        let mut intensity = T::zero();
        for (i, &(a, wa)) in nbrs.iter().enumerate() {
            for &(b, wb) in &nbrs[i + 1..] {
                if let Some(wab) = weight_of(a, b) {
                    closed += 1;
                    if weighted {
                        intensity += ((wa / max_w) * (wb / max_w) * (wab / max_w)).powf(third);
                    }
                }
            }
        }
        triangles += closed;
        let possible = T::of_usize(k * (k - 1) / 2);
        *slot = if weighted {
            intensity / possible
        } else {
            T::of_usize(closed) / possible
        };
    }
    // Each triangle is counted once per corner above.
    let transitivity = if triples > 0 {
        T::of_usize(triangles) / T::of_usize(triples)
    } else {
        T::zero()
    };
    Clustering {
        local,
        transitivity,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Components<T> {
    pub count: usize,
    pub largest_fraction: T,
    /// Degree assortativity; 0 when undefined.
    pub assortativity: T,
}

/// Connected components and degree assortativity of an undirected view.
pub fn components_assortativity<T: Real>(g: &View<T>) -> Components<T> {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    let mut largest = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &(w, _) in g.successors(v).iter().chain(g.predecessors(v)) {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        largest = largest.max(size);
        count += 1;
    }
    Components {
        count,
        largest_fraction: if n > 0 {
            T::of_usize(largest) / T::of_usize(n)
        } else {
            T::zero()
        },
        assortativity: assortativity(g),
    }
}

fn assortativity<T: Real>(g: &View<T>) -> T {
    let m = g.edge_count();
    if m == 0 {
        return T::zero();
    }
    let degree = |v: usize| T::of_usize(g.successors(v).len());
    let mf = T::of_usize(m);
    let half = T::of(0.5);
    let (mut prod, mut sum, mut sq) = (T::zero(), T::zero(), T::zero());
    for &(u, v, _) in g.edges() {
        let (j, k) = (degree(u), degree(v));
        prod += j * k;
        sum += half * (j + k);
        sq += half * (j * j + k * k);
    }
    let mean = sum / mf;
    let num = prod / mf - mean * mean;
    let den = sq / mf - mean * mean;
    if den.abs() <= T::epsilon() * sq / mf {
        T::zero()
    } else {
        num / den
    }
}
