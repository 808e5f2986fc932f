use crate::convgraph::Graph;
use crate::scalar::Real;

/// Edge direction a measure follows on a directed view. Undirected views
/// ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    In,
    Out,
    All,
}

/// Adjacency representation of a graph under one direction/weight variant.
///
/// Undirected views store every edge once in `edges` (with `u < v`) and in
/// both endpoints' neighbor lists. Unweighted views carry weight 1 on every
/// edge.
#[derive(Clone, Debug, PartialEq)]
pub struct View<T> {
    n: usize,
    directed: bool,
    weighted: bool,
    edges: Vec<(usize, usize, T)>,
    out_adj: Vec<Vec<(usize, T)>>,
    in_adj: Vec<Vec<(usize, T)>>,
}

impl<T: Real> View<T> {
    /// Builds a view from an edge list. Directed edges must be distinct and
    /// loop-free. For undirected views, antiparallel and repeated pairs are
    /// merged by summing weights. `weighted = false` replaces every weight
    /// by 1 after merging.
    pub fn new(n: usize, directed: bool, weighted: bool, edges: &[(usize, usize, T)]) -> Self {
        let mut list: Vec<(usize, usize, T)> = if directed {
            edges.to_vec()
        } else {
            let mut merged: Vec<(usize, usize, T)> = edges
                .iter()
                .map(|&(u, v, w)| (u.min(v), u.max(v), w))
                .collect();
            merged.sort_by_key(|&(u, v, _)| (u, v));
            let mut out: Vec<(usize, usize, T)> = Vec::with_capacity(merged.len());
            for (u, v, w) in merged {
                match out.last_mut() {
                    Some(last) if (last.0, last.1) == (u, v) => last.2 += w,
                    _ => out.push((u, v, w)),
                }
            }
            out
        };
        list.sort_by_key(|&(u, v, _)| (u, v));
        if !weighted {
            for e in &mut list {
                e.2 = T::one();
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v, w) in &list {
            out_adj[u].push((v, w));
            in_adj[v].push((u, w));
            if !directed {
                out_adj[v].push((u, w));
                in_adj[u].push((v, w));
            }
        }
        for adj in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            adj.sort_by_key(|&(v, _)| v);
        }
        View {
            n,
            directed,
            weighted,
            edges: list,
            out_adj,
            in_adj,
        }
    }

    pub fn from_graph(g: &Graph<T>, directed: bool, weighted: bool) -> Self {
        let edges: Vec<(usize, usize, T)> = g
            .edges()
            .iter()
            .map(|e| (e.source, e.target, e.weight))
            .collect();
        View::new(g.vertex_count(), directed, weighted, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn edges(&self) -> &[(usize, usize, T)] {
        &self.edges
    }

    /// Out-neighbors (all neighbors when undirected).
    pub fn successors(&self, v: usize) -> &[(usize, T)] {
        &self.out_adj[v]
    }

    /// In-neighbors (all neighbors when undirected).
    pub fn predecessors(&self, v: usize) -> &[(usize, T)] {
        &self.in_adj[v]
    }

    pub(crate) fn neighbors(&self, v: usize, dir: Direction) -> NeighborIter<'_, T> {
        let empty: &[(usize, T)] = &[];
        let (first, second) = match (self.directed, dir) {
            (false, _) | (true, Direction::Out) => (self.out_adj[v].as_slice(), empty),
            (true, Direction::In) => (self.in_adj[v].as_slice(), empty),
            (true, Direction::All) => (self.out_adj[v].as_slice(), self.in_adj[v].as_slice()),
        };
        first.iter().chain(second.iter()).copied()
    }
}

pub(crate) type NeighborIter<'a, T> = std::iter::Copied<
    std::iter::Chain<std::slice::Iter<'a, (usize, T)>, std::slice::Iter<'a, (usize, T)>>,
>;

/// The four weight/direction variants of a conversational graph.
#[derive(Clone, Debug)]
pub struct Views<T> {
    pub directed_weighted: View<T>,
    pub directed_unweighted: View<T>,
    pub undirected_weighted: View<T>,
    pub undirected_unweighted: View<T>,
}

impl<T: Real> Views<T> {
    pub fn get(&self, directed: bool, weighted: bool) -> &View<T> {
        match (directed, weighted) {
            (true, true) => &self.directed_weighted,
            (true, false) => &self.directed_unweighted,
            (false, true) => &self.undirected_weighted,
            (false, false) => &self.undirected_unweighted,
        }
    }
}

pub fn graph_views<T: Real>(g: &Graph<T>) -> Views<T> {
    Views {
        directed_weighted: View::from_graph(g, true, true),
        directed_unweighted: View::from_graph(g, true, false),
        undirected_weighted: View::from_graph(g, false, true),
        undirected_unweighted: View::from_graph(g, false, false),
    }
}
