//! Topological measures over conversational graphs and the graph feature
//! manifest built from them.

mod degree;
mod features;
mod modularity;
mod paths;
mod spectral;
mod structure;
mod view;

pub use degree::{coreness, degree_strength, DegreeStrength};
pub use features::{
    compute_feature_vector, feature_manifest, feature_specs, Dirs, GraphFeatureConfig,
    GraphFeatures, GraphKind, Measure, MeasureSpec, Scale, Weights,
};
pub use modularity::{modularity, modularity_of, Partition};
pub use paths::{betweenness, closeness_eccentricity, distances_from, DistanceProfile};
pub use spectral::{hits, pagerank, Hits, DEFAULT_DAMPING, POWER_MAX_ITER, POWER_TOLERANCE};
pub use structure::{
    clustering_transitivity, components_assortativity, reciprocity_density_counts, Clustering,
    Components, Counts,
};
pub use view::{graph_views, Direction, View, Views};
