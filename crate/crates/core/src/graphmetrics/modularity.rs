//! Deterministic multilevel greedy modularity optimization (Louvain-style
//! local moves followed by community aggregation).

use std::collections::BTreeMap;

use super::view::View;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Partition<T> {
    /// Community of every vertex, numbered from 0 in order of the smallest
    /// member vertex.
    pub community: Vec<usize>,
    pub q: T,
}

/// Modularity of `community` on an undirected view.
pub fn modularity_of<T: Real>(g: &View<T>, weighted: bool, community: &[usize]) -> T {
    let w = |x: T| if weighted { x } else { T::one() };
    let total: T = g.edges().iter().map(|e| w(e.2)).sum();
    if total <= T::zero() {
        return T::zero();
    }
    let k = community.iter().max().map_or(0, |&c| c + 1);
    let mut internal = vec![T::zero(); k];
    let mut degree = vec![T::zero(); k];
    for &(u, v, x) in g.edges() {
        let x = w(x);
        degree[community[u]] += x;
        degree[community[v]] += x;
        if community[u] == community[v] {
            internal[community[u]] += x;
        }
    }
    let two_m = total + total;
    (0..k)
        .map(|c| internal[c] / total - (degree[c] / two_m).powi(2))
        .sum()
}

struct Level<T> {
    adj: Vec<Vec<(usize, T)>>,
    loops: Vec<T>,
}

impl<T: Real> Level<T> {
    fn strength(&self, i: usize) -> T {
        self.adj[i].iter().map(|&(_, w)| w).sum::<T>() + self.loops[i] + self.loops[i]
    }

    /// Greedy local moves in ascending node order; a node only leaves its
    /// community for a strictly better one. Returns the community of every
    /// node and whether anything moved.
    fn local_moves(&self, two_m: T) -> (Vec<usize>, bool) {
        let n = self.adj.len();
        let k: Vec<T> = (0..n).map(|i| self.strength(i)).collect();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut tot = k.clone();
        let mut any = false;
        loop {
            let mut moved = false;
            for i in 0..n {
                let mut links: BTreeMap<usize, T> = BTreeMap::new();
                for &(j, w) in &self.adj[i] {
                    *links.entry(comm[j]).or_insert(T::zero()) += w;
                }
                let old = comm[i];
                tot[old] -= k[i];
                let gain = |c: usize, w: T| w - tot[c] * k[i] / two_m;
                let mut best = old;
                let mut best_gain = gain(old, links.get(&old).copied().unwrap_or(T::zero()));
                let eps = T::tie_eps(k[i]);
                for (&c, &w) in &links {
                    let g = gain(c, w);
                    if g > best_gain + eps {
                        best = c;
                        best_gain = g;
                    }
                }
                tot[best] += k[i];
                if best != old {
                    comm[i] = best;
                    moved = true;
                    any = true;
                }
            }
            if !moved {
                break;
            }
        }
        (renumber(&comm), any)
    }

    fn aggregate(&self, comm: &[usize]) -> Level<T> {
        let k = comm.iter().max().map_or(0, |&c| c + 1);
        let mut loops = vec![T::zero(); k];
        let mut links: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); k];
        for (i, adj) in self.adj.iter().enumerate() {
            loops[comm[i]] += self.loops[i];
            for &(j, w) in adj {
                if i < j {
                    let (a, b) = (comm[i], comm[j]);
                    if a == b {
                        loops[a] += w;
                    } else {
                        *links[a].entry(b).or_insert(T::zero()) += w;
                        *links[b].entry(a).or_insert(T::zero()) += w;
                    }
                }
            }
        }
        Level {
            adj: links.into_iter().map(|m| m.into_iter().collect()).collect(),
            loops,
        }
    }
}

fn renumber(comm: &[usize]) -> Vec<usize> {
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    comm.iter()
        .map(|&c| {
            let next = ids.len();
            *ids.entry(c).or_insert(next)
        })
        .collect()
}

/// Greedy modularity optimization on an undirected view; returns the final
/// partition and its modularity. Graphs without edges get singleton
/// communities and `q = 0`.
pub fn modularity<T: Real>(g: &View<T>, weighted: bool) -> Partition<T> {
    let n = g.vertex_count();
    let w = |x: T| if weighted { x } else { T::one() };
    let mut level = Level {
        adj: (0..n)
            .map(|v| g.successors(v).iter().map(|&(u, x)| (u, w(x))).collect())
            .collect(),
        loops: vec![T::zero(); n],
    };
    let two_m: T = g.edges().iter().map(|e| w(e.2)).sum::<T>() * T::of(2.0);
    let mut community: Vec<usize> = (0..n).collect();
    if two_m <= T::zero() {
        return Partition {
            community,
            q: T::zero(),
        };
    }
    loop {
        let (comm, moved) = level.local_moves(two_m);
        if !moved {
            break;
        }
        for c in &mut community {
            *c = comm[*c];
        }
        level = level.aggregate(&comm);
    }
    let community = renumber(&community);
    let q = modularity_of(g, weighted, &community);
    Partition { community, q }
}
