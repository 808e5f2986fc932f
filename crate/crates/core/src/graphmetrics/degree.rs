use super::view::{Direction, View};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeStrength<T> {
    /// Number of incident edges in the requested direction.
    pub degree: Vec<T>,
    /// Sum of the weights of those edges.
    pub strength: Vec<T>,
}

pub fn degree_strength<T: Real>(g: &View<T>, dir: Direction) -> DegreeStrength<T> {
    let n = g.vertex_count();
    let mut degree = vec![T::zero(); n];
    let mut strength = vec![T::zero(); n];
    for v in 0..n {
        for (_, w) in g.neighbors(v, dir) {
            degree[v] += T::one();
            strength[v] += w;
        }
    }
    DegreeStrength { degree, strength }
}

/// k-core index of every vertex, with degrees taken in direction `dir`.
///
/// Vertices are peeled in order of current minimum degree; a vertex's
/// coreness is the largest minimum seen up to its removal.
pub fn coreness<T: Real>(g: &View<T>, dir: Direction) -> Vec<usize> {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.neighbors(v, dir).count()).collect();
    let mut removed = vec![false; n];
    let mut core = vec![0usize; n];
    // Removing v lowers the degree of the vertices whose degree counts an
    // edge incident to v: out-neighbors for in-degree, in-neighbors for
    // out-degree.
    let affected = match dir {
        Direction::In => Direction::Out,
        Direction::Out => Direction::In,
        Direction::All => Direction::All,
    };
    let mut level = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| degree[v])
            .expect("an unremoved vertex remains");
        level = level.max(degree[v]);
        core[v] = level;
        removed[v] = true;
        for (w, _) in g.neighbors(v, affected) {
            if !removed[w] {
                degree[w] -= 1;
            }
        }
    }
    core
}
