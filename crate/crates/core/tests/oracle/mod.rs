//! Brute-force reference implementations of the graph measures, working on
//! dense weight matrices, shared by the integration and acceptance tests.

#![allow(dead_code, clippy::needless_range_loop)]

use convabuse::graphmetrics::{
    betweenness, closeness_eccentricity, clustering_transitivity, components_assortativity, coreness,
    degree_strength, hits, modularity, pagerank, reciprocity_density_counts, Direction, View,
};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod extraction;
pub mod learners;
pub mod pipelines;
pub mod planted;

const INF: f64 = f64::INFINITY;
pub const REAL_TOL: f64 = 1e-8;

/// A digraph as a dense matrix; `w[u][v] > 0` is the weight of `u → v`.
#[derive(Clone, Debug)]
pub struct Dense {
    pub w: Vec<Vec<f64>>,
}

impl Dense {
    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn edge_list(&self) -> Vec<(usize, usize, f64)> {
        let mut e = Vec::new();
        for u in 0..self.n() {
            for v in 0..self.n() {
                if self.w[u][v] > 0.0 {
                    e.push((u, v, self.w[u][v]));
                }
            }
        }
        e
    }

    pub fn view(&self, directed: bool, weighted: bool) -> View<f64> {
        View::new(self.n(), directed, weighted, &self.edge_list())
    }

    /// Adjacency of a view variant: antiparallel weights add up when
    /// undirected; every weight is 1 when unweighted.
    pub fn adjacency(&self, directed: bool, weighted: bool) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut a = vec![vec![0.0; n]; n];
        for u in 0..n {
            for v in 0..n {
                let x = if directed { self.w[u][v] } else { self.w[u][v] + self.w[v][u] };
                if x > 0.0 {
                    a[u][v] = if weighted { x } else { 1.0 };
                }
            }
        }
        a
    }
}

/// Seeded random digraph with at most 7 vertices and weights on the grid of
/// conversational-graph increments (multiples of 1/9).
pub fn random_digraph(seed: u64) -> Dense {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=7);
    let p: f64 = rng.random_range(0.15..0.7);
    let mut w = vec![vec![0.0; n]; n];
    for (u, row) in w.iter_mut().enumerate() {
        for (v, x) in row.iter_mut().enumerate() {
            if u != v && rng.random_bool(p) {
                *x = rng.random_range(1..=18) as f64 / 9.0;
            }
        }
    }
    Dense { w }
}

fn oriented(a: &[Vec<f64>], directed: bool, dir: Direction) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|u| {
            (0..n)
                .map(|v| match (directed, dir) {
                    (false, _) | (true, Direction::Out) => a[u][v],
                    (true, Direction::In) => a[v][u],
                    (true, Direction::All) => a[u][v] + a[v][u],
                })
                .collect()
        })
        .collect()
}

/// Degree and strength straight from the matrix; on directed views `All`
/// counts in- and out-edges separately.
pub fn degree_oracle(a: &[Vec<f64>], directed: bool, dir: Direction) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut degree = vec![0.0; n];
    let mut strength = vec![0.0; n];
    for u in 0..n {
        for v in 0..n {
            let mut take = |x: f64| {
                if x > 0.0 {
                    degree[u] += 1.0;
                    strength[u] += x;
                }
            };
            match (directed, dir) {
                (false, _) | (true, Direction::Out) => take(a[u][v]),
                (true, Direction::In) => take(a[v][u]),
                (true, Direction::All) => {
                    take(a[u][v]);
                    take(a[v][u]);
                }
            }
        }
    }
    (degree, strength)
}

/// k-cores by iterated removal to a fixpoint, for every k.
pub fn coreness_oracle(a: &[Vec<f64>], directed: bool, dir: Direction) -> Vec<usize> {
    let n = a.len();
    let mut core = vec![0; n];
    for k in 1..=2 * n {
        let mut alive = vec![true; n];
        loop {
            let deg = |v: usize, alive: &[bool]| -> usize {
                (0..n)
                    .filter(|&x| alive[x])
                    .map(|x| match (directed, dir) {
                        (false, _) | (true, Direction::Out) => (a[v][x] > 0.0) as usize,
                        (true, Direction::In) => (a[x][v] > 0.0) as usize,
                        (true, Direction::All) => (a[v][x] > 0.0) as usize + (a[x][v] > 0.0) as usize,
                    })
                    .sum()
            };
            let drop: Vec<usize> = (0..n).filter(|&v| alive[v] && deg(v, &alive) < k).collect();
            if drop.is_empty() {
                break;
            }
            for v in drop {
                alive[v] = false;
            }
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k;
            }
        }
    }
    core
}

/// Edge lengths (1 or 1/w) along direction `dir`; infinite where absent.
fn lengths(a: &[Vec<f64>], directed: bool, weighted: bool, dir: Direction) -> Vec<Vec<f64>> {
    let n = a.len();
    let len = |x: f64| {
        if x > 0.0 {
            if weighted {
                1.0 / x
            } else {
                1.0
            }
        } else {
            INF
        }
    };
    (0..n)
        .map(|u| {
            (0..n)
                .map(|v| match (directed, dir) {
                    (false, _) | (true, Direction::Out) => len(a[u][v]),
                    (true, Direction::In) => len(a[v][u]),
                    (true, Direction::All) => len(a[u][v]).min(len(a[v][u])),
                })
                .collect()
        })
        .collect()
}

pub struct PathOracle {
    pub closeness: Vec<f64>,
    pub eccentricity: Vec<f64>,
    pub diameter: f64,
    pub radius: f64,
    pub average_path_length: f64,
}

/// All-pairs distances by Floyd–Warshall, then the closeness family.
pub fn path_oracle(a: &[Vec<f64>], directed: bool, weighted: bool, dir: Direction) -> PathOracle {
    let n = a.len();
    let mut d = lengths(a, directed, weighted, dir);
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let mut closeness = vec![0.0; n];
    let mut eccentricity = vec![0.0; n];
    let mut eccs = Vec::new();
    let (mut total, mut pairs) = (0.0, 0usize);
    for v in 0..n {
        let reach: Vec<f64> = (0..n).filter(|&u| u != v && d[v][u] < INF).map(|u| d[v][u]).collect();
        if reach.is_empty() {
            continue;
        }
        let sum: f64 = reach.iter().sum();
        closeness[v] = reach.len() as f64 / sum;
        eccentricity[v] = reach.iter().cloned().fold(0.0, f64::max);
        eccs.push(eccentricity[v]);
        total += sum;
        pairs += reach.len();
    }
    PathOracle {
        closeness,
        eccentricity,
        diameter: eccs.iter().cloned().fold(0.0, f64::max),
        radius: if eccs.is_empty() { 0.0 } else { eccs.iter().cloned().fold(INF, f64::min) },
        average_path_length: if pairs > 0 { total / pairs as f64 } else { 0.0 },
    }
}

/// Betweenness by enumerating every simple path of every pair.
pub fn betweenness_oracle(a: &[Vec<f64>], directed: bool, weighted: bool) -> Vec<f64> {
    let n = a.len();
    let len = lengths(a, directed, weighted, Direction::Out);
    let mut credit = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || (!directed && t < s) {
                continue;
            }
            let mut paths: Vec<(f64, Vec<usize>)> = Vec::new();
            let mut stack = vec![s];
            enumerate(&len, t, 0.0, &mut stack, &mut paths);
            let Some(best) = paths.iter().map(|p| p.0).reduce(f64::min) else {
                continue;
            };
            let shortest: Vec<&Vec<usize>> = paths
                .iter()
                .filter(|p| p.0 - best <= 1e-9 * best.max(1.0))
                .map(|p| &p.1)
                .collect();
            for path in &shortest {
                for &v in &path[1..path.len() - 1] {
                    credit[v] += 1.0 / shortest.len() as f64;
                }
            }
        }
    }
    credit
}

fn enumerate(len: &[Vec<f64>], t: usize, so_far: f64, stack: &mut Vec<usize>, out: &mut Vec<(f64, Vec<usize>)>) {
    let v = *stack.last().unwrap();
    if v == t {
        out.push((so_far, stack.clone()));
        return;
    }
    for u in 0..len.len() {
        if len[v][u] < INF && !stack.contains(&u) {
            stack.push(u);
            enumerate(len, t, so_far + len[v][u], stack, out);
            stack.pop();
        }
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    x
}

/// PageRank as the solution of `(I − dM) r = (1 − d)/n`.
pub fn pagerank_oracle(a: &[Vec<f64>], damping: f64) -> Vec<f64> {
    let n = a.len();
    let mut m = vec![vec![0.0; n]; n];
    for u in 0..n {
        let out: f64 = a[u].iter().sum();
        for v in 0..n {
            let p = if out > 0.0 { a[u][v] / out } else { 1.0 / n as f64 };
            m[v][u] = p;
        }
    }
    let sys: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 } - damping * m[i][j]).collect())
        .collect();
    solve(sys, vec![(1.0 - damping) / n as f64; n])
}

/// Hub and authority from the eigen-decomposition of `AᵀA`: the start
/// vector `Aᵀ1` projected onto the dominant eigenspace, then `h ∝ A a`.
pub fn hits_oracle(a: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    if a.iter().flatten().all(|&x| x == 0.0) {
        return (vec![0.0; n], vec![0.0; n]);
    }
    let am = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let eig = SymmetricEigen::new(am.transpose() * &am);
    let top = eig.eigenvalues.max();
    let a0 = am.transpose() * DVector::from_element(n, 1.0);
    let mut proj = DVector::zeros(n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda >= top * (1.0 - 1e-9) {
            let v = eig.eigenvectors.column(k);
            proj += v * v.dot(&a0);
        }
    }
    let auth = proj.normalize();
    let hub = (&am * &auth).normalize();
    (hub.iter().copied().collect(), auth.iter().copied().collect())
}

pub struct Structure {
    pub local: Vec<f64>,
    pub transitivity: f64,
}

/// Local clustering and transitivity by enumerating vertex triples.
pub fn clustering_oracle(a: &[Vec<f64>], weighted: bool) -> Structure {
    let n = a.len();
    let max_w = a.iter().flatten().cloned().fold(0.0, f64::max);
    let mut local = vec![0.0; n];
    let mut triples = 0usize;
    for v in 0..n {
        let nb: Vec<usize> = (0..n).filter(|&u| a[v][u] > 0.0).collect();
        let k = nb.len();
        if k < 2 {
            continue;
        }
        let possible = (k * (k - 1) / 2) as f64;
        triples += k * (k - 1) / 2;
        let mut sum = 0.0;
        for i in 0..k {
            for j in i + 1..k {
                let (x, y) = (nb[i], nb[j]);
                if a[x][y] > 0.0 {
                    sum += if weighted {
                        (a[v][x] * a[v][y] * a[x][y] / (max_w * max_w * max_w)).cbrt()
                    } else {
                        1.0
                    };
                }
            }
        }
        local[v] = sum / possible;
    }
    let mut triangles = 0usize;
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                if a[x][y] > 0.0 && a[y][z] > 0.0 && a[x][z] > 0.0 {
                    triangles += 1;
                }
            }
        }
    }
    Structure {
        local,
        transitivity: if triples > 0 { 3.0 * triangles as f64 / triples as f64 } else { 0.0 },
    }
}

/// Component count, largest-component fraction and degree assortativity
/// (Pearson correlation over both orientations of every edge).
pub fn components_oracle(a: &[Vec<f64>]) -> (usize, f64, f64) {
    let n = a.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for u in 0..n {
        for v in 0..n {
            if a[u][v] > 0.0 {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru] = rv;
            }
        }
    }
    let mut sizes = vec![0usize; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        sizes[r] += 1;
    }
    let count = sizes.iter().filter(|&&s| s > 0).count();
    let largest = if n > 0 { *sizes.iter().max().unwrap() as f64 / n as f64 } else { 0.0 };

    let deg: Vec<f64> = a.iter().map(|r| r.iter().filter(|&&x| x > 0.0).count() as f64).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if a[u][v] > 0.0 {
                xs.push(deg[u]);
                ys.push(deg[v]);
            }
        }
    }
    let r = if xs.is_empty() {
        0.0
    } else {
        let k = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        if vx * vy <= 1e-24 {
            0.0
        } else {
            cov / (vx * vy).sqrt()
        }
    };
    (count, largest, r)
}

/// Modularity of a partition: `(1/2m) Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j)`.
pub fn modularity_oracle(a: &[Vec<f64>], community: &[usize]) -> f64 {
    let n = a.len();
    let two_m: f64 = a.iter().flatten().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let k: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if community[i] == community[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Reciprocity, density and counts from the matrix.
pub fn counts_oracle(a: &[Vec<f64>]) -> (usize, usize, f64, f64) {
    let n = a.len();
    let mut m = 0;
    let mut mutual = 0;
    for u in 0..n {
        for v in 0..n {
            if a[u][v] > 0.0 {
                m += 1;
                if a[v][u] > 0.0 {
                    mutual += 1;
                }
            }
        }
    }
    let density = if n > 1 { m as f64 / (n * (n - 1)) as f64 } else { 0.0 };
    let reciprocity = if m > 0 { mutual as f64 / m as f64 } else { 0.0 };
    (n, m, density, reciprocity)
}

fn close(what: &str, got: &[f64], want: &[f64]) -> Result<(), String> {
    if got.len() != want.len() {
        return Err(format!("{what}: length {} vs {}", got.len(), want.len()));
    }
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        if (g - w).is_nan() || (g - w).abs() > REAL_TOL {
            return Err(format!("{what}[{i}]: got {g}, oracle {w}"));
        }
    }
    Ok(())
}

fn exact<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, oracle {want:?}"))
    }
}

/// Compares every measure on `g` with its oracle; names the first mismatch.
pub fn check_graph(g: &Dense) -> Result<(), String> {
    const DIRS: [Direction; 3] = [Direction::In, Direction::Out, Direction::All];
    for directed in [true, false] {
        for weighted in [false, true] {
            let view = g.view(directed, weighted);
            let a = g.adjacency(directed, weighted);
            let tag = format!("directed={directed} weighted={weighted}");
            for dir in DIRS {
                let got = degree_strength(&view, dir);
                let (deg, strength) = degree_oracle(&a, directed, dir);
                exact(&format!("degree {tag} {dir:?}"), got.degree, deg)?;
                close(&format!("strength {tag} {dir:?}"), &got.strength, &strength)?;
                if !weighted {
                    exact(
                        &format!("coreness {tag} {dir:?}"),
                        coreness(&view, dir),
                        coreness_oracle(&a, directed, dir),
                    )?;
                }
                let got = closeness_eccentricity(&view, weighted, dir);
                let want = path_oracle(&a, directed, weighted, dir);
                close(&format!("closeness {tag} {dir:?}"), &got.closeness, &want.closeness)?;
                if weighted {
                    close(&format!("eccentricity {tag} {dir:?}"), &got.eccentricity, &want.eccentricity)?;
                } else {
                    exact(&format!("eccentricity {tag} {dir:?}"), got.eccentricity, want.eccentricity)?;
                }
                close(
                    &format!("diameter/radius/apl {tag} {dir:?}"),
                    &[got.diameter, got.radius, got.average_path_length],
                    &[want.diameter, want.radius, want.average_path_length],
                )?;
            }
            close(
                &format!("betweenness {tag}"),
                &betweenness(&view, weighted),
                &betweenness_oracle(&a, directed, weighted),
            )?;
            if directed {
                let pr = pagerank(&view, weighted, 0.85);
                close(&format!("pagerank {tag}"), &pr, &pagerank_oracle(&a, 0.85))?;
                let h = hits(&view, weighted);
                let (hub, auth) = hits_oracle(&a);
                close(&format!("hub {tag}"), &h.hub, &hub)?;
                close(&format!("authority {tag}"), &h.authority, &auth)?;
            } else {
                let c = clustering_transitivity(&view, weighted);
                let want = clustering_oracle(&a, weighted);
                close(&format!("clustering {tag}"), &c.local, &want.local)?;
                close(&format!("transitivity {tag}"), &[c.transitivity], &[want.transitivity])?;
                let p = modularity(&view, weighted);
                close(&format!("modularity {tag}"), &[p.q], &[modularity_oracle(&a, &p.community)])?;
            }
        }
    }
    let a = g.adjacency(true, false);
    let c = reciprocity_density_counts(&g.view(true, false));
    let (n, m, density, reciprocity) = counts_oracle(&a);
    exact("vertex/edge count", (c.vertices, c.edges), (n, m))?;
    close("density/reciprocity", &[c.density, c.reciprocity], &[density, reciprocity])?;
    let comp = components_assortativity(&g.view(false, false));
    let (count, largest, r) = components_oracle(&g.adjacency(false, false));
    exact("components", comp.count, count)?;
    close("largest component/assortativity", &[comp.largest_fraction, comp.assortativity], &[largest, r])?;
    Ok(())
}
