//! Abusive message detection in chat logs, combining content features with
//! features of the conversational graph around each message.
//!
//! The numeric layers (graph measures, learners) are generic over
//! [`Real`]; the aliases below fix them to `f64`, which the fusion,
//! evaluation and selection layers use.

pub mod content;
pub mod convgraph;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod fusion;
pub mod graphmetrics;
pub mod learn;
pub mod scalar;
pub mod select;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ConvGraph = convgraph::Graph<f64>;
pub type GraphView = graphmetrics::View<f64>;
pub type GraphFeatureVector = graphmetrics::GraphFeatures<f64>;
pub type Svm = learn::LinearSvm<f64>;
pub type StandardScaler = learn::Scaler<f64>;
