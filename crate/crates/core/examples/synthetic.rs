//! Evaluates the five pipelines on the bundled synthetic corpus.
//!
//! cargo run --release -p convabuse --example synthetic -- [seed]

use std::time::Instant;

use convabuse::content::BadWordLexicon;
use convabuse::corpus::{build_balanced_dataset, generate_synthetic, SynthParams, SYNTH_LEXICON};
use convabuse::eval::{evaluate, make_splits};
use convabuse::fusion::{ContextParams, FeatureTable, FusionConfig, PipelineKind};
use convabuse::graphmetrics::GraphFeatureConfig;

fn main() -> convabuse::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let corpus = generate_synthetic(&SynthParams {
        seed,
        ..SynthParams::default()
    })?;
    let dataset = build_balanced_dataset(&corpus, seed)?;
    let lexicon = BadWordLexicon::new(SYNTH_LEXICON);
    let t = Instant::now();
    let table = FeatureTable::build(
        &corpus,
        &dataset,
        &lexicon,
        ContextParams::default(),
        GraphFeatureConfig::default(),
    )?;
    println!("featurized {} messages in {:.2?}", table.len(), t.elapsed());
    let plan = make_splits(&table.labels, seed)?;
    let config = FusionConfig {
        seed,
        ..FusionConfig::default()
    };
    for kind in PipelineKind::ALL {
        let t = Instant::now();
        let e = evaluate(kind, &table, &plan, &config)?;
        let m = e.report.mean;
        println!(
            "{kind:8} P {:.4} R {:.4} F {:.4} (±{:.4})  {:.2?}",
            m.precision,
            m.recall,
            m.f_measure,
            e.report.std.f_measure,
            t.elapsed()
        );
    }
    Ok(())
}
