//! Content, graph, early, late and hybrid fusion pipelines.

mod pipeline;
mod table;

pub use pipeline::{
    fit_stage, manifest_hash, score_message, train_pipeline, Blocks, FusionConfig, PipelineKind, SampleRef,
    Score, Stage, TrainedPipeline, CONTENT_SCORE, GRAPH_SCORE, PIPELINE_SCHEMA,
};
pub use table::{graph_row, ContextParams, FeatureTable, GraphRow};
