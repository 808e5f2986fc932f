//! The graph feature manifest and its evaluation on a context's Before,
//! After and Full graphs.
//!
//! Feature names read `<Measure>.<Graph>.<Weights>.<Directions>.<Scale>`:
//! graph `B`/`A`/`F`, weights `U`nweighted/`W`eighted, directions
//! `U`ndirected/`D`irected/`I`ncoming/`O`utgoing, scale `G`raph or vertex
//! (`N`), and `-` where a letter does not apply.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::degree::{coreness, degree_strength};
use super::modularity::modularity;
use super::paths::{betweenness, closeness_eccentricity, DistanceProfile};
use super::spectral::{hits, pagerank, DEFAULT_DAMPING};
use super::structure::{
    clustering_transitivity, components_assortativity, reciprocity_density_counts,
};
use super::view::{graph_views, Direction, Views};
use crate::convgraph::Graph;
use crate::scalar::{mean, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Measure {
    Degree,
    Strength,
    Coreness,
    Closeness,
    Betweenness,
    Eccentricity,
    PageRank,
    Hub,
    Authority,
    Clustering,
    VertexCount,
    EdgeCount,
    Density,
    Reciprocity,
    Diameter,
    Radius,
    AvgPathLength,
    Transitivity,
    Modularity,
    Assortativity,
    Components,
    LargestComponent,
}

impl Measure {
    fn name(self) -> &'static str {
        match self {
            Measure::Degree => "Degree",
            Measure::Strength => "Strength",
            Measure::Coreness => "Coreness",
            Measure::Closeness => "Closeness",
            Measure::Betweenness => "Betweenness",
            Measure::Eccentricity => "Eccentricity",
            Measure::PageRank => "PageRank",
            Measure::Hub => "Hub",
            Measure::Authority => "Authority",
            Measure::Clustering => "Clustering",
            Measure::VertexCount => "VertexCount",
            Measure::EdgeCount => "EdgeCount",
            Measure::Density => "Density",
            Measure::Reciprocity => "Reciprocity",
            Measure::Diameter => "Diameter",
            Measure::Radius => "Radius",
            Measure::AvgPathLength => "AvgPathLength",
            Measure::Transitivity => "Transitivity",
            Measure::Modularity => "Modularity",
            Measure::Assortativity => "Assortativity",
            Measure::Components => "Components",
            Measure::LargestComponent => "LargestComponent",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphKind {
    Before,
    After,
    Full,
}

impl GraphKind {
    pub const ALL: [GraphKind; 3] = [GraphKind::Before, GraphKind::After, GraphKind::Full];

    fn letter(self) -> char {
        match self {
            GraphKind::Before => 'B',
            GraphKind::After => 'A',
            GraphKind::Full => 'F',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Weights {
    Unweighted,
    Weighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dirs {
    Undirected,
    Directed,
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scale {
    Vertex,
    Graph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub measure: Measure,
    pub graph: GraphKind,
    pub weights: Option<Weights>,
    pub directions: Option<Dirs>,
    pub scale: Scale,
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.weights {
            Some(Weights::Unweighted) => 'U',
            Some(Weights::Weighted) => 'W',
            None => '-',
        };
        let d = match self.directions {
            Some(Dirs::Undirected) => 'U',
            Some(Dirs::Directed) => 'D',
            Some(Dirs::In) => 'I',
            Some(Dirs::Out) => 'O',
            None => '-',
        };
        let s = match self.scale {
            Scale::Vertex => 'N',
            Scale::Graph => 'G',
        };
        write!(
            f,
            "{}.{}.{w}.{d}.{s}",
            self.measure.name(),
            self.graph.letter()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GraphFeatureConfig {
    /// Graphs included in the manifest, in manifest order.
    pub graphs: Vec<GraphKind>,
    pub damping: f64,
}

impl Default for GraphFeatureConfig {
    fn default() -> Self {
        GraphFeatureConfig {
            graphs: GraphKind::ALL.to_vec(),
            damping: DEFAULT_DAMPING,
        }
    }
}

const BOTH_WEIGHTS: [Option<Weights>; 2] = [Some(Weights::Unweighted), Some(Weights::Weighted)];
const IOU: [Option<Dirs>; 3] = [Some(Dirs::In), Some(Dirs::Out), Some(Dirs::Undirected)];

/// Measure, weight variants, direction variants, and whether the measure is
/// per-vertex (reported at scales N and G) or global (scale G only).
type Variants = (Measure, Vec<Option<Weights>>, Vec<Option<Dirs>>, bool);

/// Per-graph variant matrix.
fn variant_matrix() -> Vec<Variants> {
    use Measure::*;
    let none_w = vec![None];
    let u = vec![Some(Dirs::Undirected)];
    let d = vec![Some(Dirs::Directed)];
    vec![
        (Degree, none_w.clone(), IOU.to_vec(), true),
        (Strength, vec![Some(Weights::Weighted)], IOU.to_vec(), true),
        (Coreness, none_w.clone(), IOU.to_vec(), true),
        (
            Closeness,
            BOTH_WEIGHTS.to_vec(),
            vec![Some(Dirs::Out), Some(Dirs::Undirected)],
            true,
        ),
        (
            Betweenness,
            BOTH_WEIGHTS.to_vec(),
            vec![Some(Dirs::Directed), Some(Dirs::Undirected)],
            true,
        ),
        (Eccentricity, none_w.clone(), IOU.to_vec(), true),
        (PageRank, BOTH_WEIGHTS.to_vec(), d.clone(), true),
        (Hub, BOTH_WEIGHTS.to_vec(), d.clone(), true),
        (Authority, BOTH_WEIGHTS.to_vec(), d.clone(), true),
        (Clustering, BOTH_WEIGHTS.to_vec(), u.clone(), true),
        (VertexCount, none_w.clone(), vec![None], false),
        (EdgeCount, none_w.clone(), d.clone(), false),
        (Density, none_w.clone(), d.clone(), false),
        (Reciprocity, none_w.clone(), d, false),
        (Diameter, BOTH_WEIGHTS.to_vec(), u.clone(), false),
        (Radius, BOTH_WEIGHTS.to_vec(), u.clone(), false),
        (AvgPathLength, BOTH_WEIGHTS.to_vec(), u.clone(), false),
        (Transitivity, none_w.clone(), u.clone(), false),
        (Modularity, BOTH_WEIGHTS.to_vec(), u.clone(), false),
        (Assortativity, none_w.clone(), u.clone(), false),
        (Components, none_w.clone(), u.clone(), false),
        (LargestComponent, none_w, u, false),
    ]
}

/// Ordered feature specs; every graph feature vector is aligned with it.
pub fn feature_specs(config: &GraphFeatureConfig) -> Vec<MeasureSpec> {
    let matrix = variant_matrix();
    let mut specs = Vec::new();
    for &graph in &config.graphs {
        for (measure, weights, dirs, per_vertex) in &matrix {
            for &w in weights {
                for &d in dirs {
                    let scales: &[Scale] = if *per_vertex {
                        &[Scale::Vertex, Scale::Graph]
                    } else {
                        &[Scale::Graph]
                    };
                    for &scale in scales {
                        specs.push(MeasureSpec {
                            measure: *measure,
                            graph,
                            weights: w,
                            directions: d,
                            scale,
                        });
                    }
                }
            }
        }
    }
    specs
}

pub fn feature_manifest(config: &GraphFeatureConfig) -> Vec<String> {
    feature_specs(config)
        .iter()
        .map(|s| s.to_string())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphFeatures<T> {
    /// Aligned with the manifest; never NaN or infinite.
    pub values: Vec<T>,
    /// `true` where the value was filled by the missing-value policy.
    pub missing: Vec<bool>,
}

enum Value<T> {
    PerVertex(Vec<T>),
    Global(T),
}

type Key = (Measure, Option<Weights>, Option<Dirs>);

fn measure_table<T: Real>(views: &Views<T>, damping: T) -> HashMap<Key, Value<T>> {
    use Measure::*;
    use Value::*;
    let mut table: HashMap<Key, Value<T>> = HashMap::new();
    let weighted = |w: bool| {
        if w {
            Some(Weights::Weighted)
        } else {
            Some(Weights::Unweighted)
        }
    };
    let dir_of = |d: Dirs| match d {
        Dirs::In => Direction::In,
        Dirs::Out => Direction::Out,
        _ => Direction::All,
    };

    for d in [Dirs::In, Dirs::Out, Dirs::Undirected] {
        let directed = d != Dirs::Undirected;
        let unweighted = degree_strength(views.get(directed, false), dir_of(d));
        let strength = degree_strength(views.get(directed, true), dir_of(d)).strength;
        table.insert((Degree, None, Some(d)), PerVertex(unweighted.degree));
        table.insert(
            (Strength, Some(Weights::Weighted), Some(d)),
            PerVertex(strength),
        );
        let core = coreness(views.get(directed, false), dir_of(d));
        table.insert(
            (Coreness, None, Some(d)),
            PerVertex(core.into_iter().map(T::of_usize).collect()),
        );
    }

    let mut profiles: HashMap<(bool, bool, Dirs), DistanceProfile<T>> = HashMap::new();
    for w in [false, true] {
        for d in [Dirs::Out, Dirs::Undirected] {
            let directed = d != Dirs::Undirected;
            profiles.insert(
                (directed, w, d),
                closeness_eccentricity(views.get(directed, w), w, dir_of(d)),
            );
        }
    }
    profiles.insert(
        (true, false, Dirs::In),
        closeness_eccentricity(views.get(true, false), false, Direction::In),
    );
    for w in [false, true] {
        let out = &profiles[&(true, w, Dirs::Out)];
        table.insert(
            (Closeness, weighted(w), Some(Dirs::Out)),
            PerVertex(out.closeness.clone()),
        );
        let und = &profiles[&(false, w, Dirs::Undirected)];
        table.insert(
            (Closeness, weighted(w), Some(Dirs::Undirected)),
            PerVertex(und.closeness.clone()),
        );
        table.insert(
            (Diameter, weighted(w), Some(Dirs::Undirected)),
            Global(und.diameter),
        );
        table.insert(
            (Radius, weighted(w), Some(Dirs::Undirected)),
            Global(und.radius),
        );
        table.insert(
            (AvgPathLength, weighted(w), Some(Dirs::Undirected)),
            Global(und.average_path_length),
        );
        table.insert(
            (Betweenness, weighted(w), Some(Dirs::Directed)),
            PerVertex(betweenness(views.get(true, w), w)),
        );
        table.insert(
            (Betweenness, weighted(w), Some(Dirs::Undirected)),
            PerVertex(betweenness(views.get(false, w), w)),
        );
        table.insert(
            (PageRank, weighted(w), Some(Dirs::Directed)),
            PerVertex(pagerank(views.get(true, w), w, damping)),
        );
        let h = hits(views.get(true, w), w);
        table.insert((Hub, weighted(w), Some(Dirs::Directed)), PerVertex(h.hub));
        table.insert(
            (Authority, weighted(w), Some(Dirs::Directed)),
            PerVertex(h.authority),
        );
        let c = clustering_transitivity(views.get(false, w), w);
        table.insert(
            (Clustering, weighted(w), Some(Dirs::Undirected)),
            PerVertex(c.local),
        );
        if !w {
            table.insert(
                (Transitivity, None, Some(Dirs::Undirected)),
                Global(c.transitivity),
            );
        }
        table.insert(
            (Modularity, weighted(w), Some(Dirs::Undirected)),
            Global(modularity(views.get(false, w), w).q),
        );
    }
    for (key, d) in [
        (Dirs::In, Dirs::In),
        (Dirs::Out, Dirs::Out),
        (Dirs::Undirected, Dirs::Undirected),
    ] {
        let directed = d != Dirs::Undirected;
        let p = &profiles[&(directed, false, d)];
        table.insert(
            (Eccentricity, None, Some(key)),
            PerVertex(p.eccentricity.clone()),
        );
    }

    let counts = reciprocity_density_counts(views.get(true, false));
    table.insert(
        (VertexCount, None, None),
        Global(T::of_usize(counts.vertices)),
    );
    table.insert(
        (EdgeCount, None, Some(Dirs::Directed)),
        Global(T::of_usize(counts.edges)),
    );
    table.insert(
        (Density, None, Some(Dirs::Directed)),
        Global(counts.density),
    );
    table.insert(
        (Reciprocity, None, Some(Dirs::Directed)),
        Global(counts.reciprocity),
    );
    let comps = components_assortativity(views.get(false, false));
    table.insert(
        (Assortativity, None, Some(Dirs::Undirected)),
        Global(comps.assortativity),
    );
    table.insert(
        (Components, None, Some(Dirs::Undirected)),
        Global(T::of_usize(comps.count)),
    );
    table.insert(
        (LargestComponent, None, Some(Dirs::Undirected)),
        Global(comps.largest_fraction),
    );
    table
}

/// Evaluates the manifest on the three graphs of one context. Vertex-scale
/// features report the targeted author's value, graph-scale features the
/// global value or the mean over vertices. An empty graph, or a graph the
/// targeted author is absent from, yields 0 for the affected features with
/// the missing flag set.
pub fn compute_feature_vector<T: Real>(
    before: &Graph<T>,
    after: &Graph<T>,
    full: &Graph<T>,
    targeted_author: &str,
    config: &GraphFeatureConfig,
) -> GraphFeatures<T> {
    let specs = feature_specs(config);
    let damping = T::of(config.damping);
    let mut values = vec![T::zero(); specs.len()];
    let mut missing = vec![false; specs.len()];
    for &kind in &config.graphs {
        let g = match kind {
            GraphKind::Before => before,
            GraphKind::After => after,
            GraphKind::Full => full,
        };
        let target = g.authors().iter().position(|a| a == targeted_author);
        let table = (g.vertex_count() > 0).then(|| measure_table(&graph_views(g), damping));
        for (i, spec) in specs.iter().enumerate().filter(|(_, s)| s.graph == kind) {
            let Some(table) = &table else {
                missing[i] = true;
                continue;
            };
            let value = &table[&(spec.measure, spec.weights, spec.directions)];
            let v = match (value, spec.scale) {
                (Value::Global(x), _) => Some(*x),
                (Value::PerVertex(xs), Scale::Graph) => Some(mean(xs)),
                (Value::PerVertex(xs), Scale::Vertex) => target.map(|t| xs[t]),
            };
            match v {
                Some(x) if x.is_finite() => values[i] = x,
                _ => missing[i] = true,
            }
        }
    }
    GraphFeatures { values, missing }
}
