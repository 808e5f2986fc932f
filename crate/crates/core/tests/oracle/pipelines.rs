//! Small featurized corpus and the leak check of the fusion pipelines.

use convabuse::content::BadWordLexicon;
use convabuse::corpus::{build_balanced_dataset, generate_synthetic, SynthParams, SYNTH_LEXICON};
use convabuse::eval::make_splits;
use convabuse::fusion::{train_pipeline, ContextParams, FeatureTable, FusionConfig, PipelineKind};
use convabuse::graphmetrics::GraphFeatureConfig;

/// Balanced table of a 40-thread synthetic corpus.
pub fn small_table(seed: u64) -> FeatureTable {
    let params = SynthParams {
        n_threads: 40,
        seed,
        abuse_rate: 0.03,
        ..SynthParams::default()
    };
    let corpus = generate_synthetic(&params).expect("corpus");
    let dataset = build_balanced_dataset(&corpus, seed).expect("dataset");
    let lexicon = BadWordLexicon::new(SYNTH_LEXICON.iter().copied());
    FeatureTable::build(&corpus, &dataset, &lexicon, ContextParams::default(), GraphFeatureConfig::default())
        .expect("table")
}

/// Trains `kind` on the first split, then again after flipping the label of
/// each of the first `flips` test rows, and requires bitwise-identical
/// bundles. Flipping a training label must change the bundle.
pub fn check_leak_freedom(kind: PipelineKind, table: &FeatureTable, flips: usize) -> Result<(), String> {
    let plan = make_splits(&table.labels, 5).map_err(|e| e.to_string())?;
    let split = &plan.repetitions[0];
    let config = FusionConfig { seed: 5, ..FusionConfig::default() };
    let bundle = |t: &FeatureTable| -> Result<String, String> {
        train_pipeline(kind, t, &split.train, &config)
            .and_then(|p| p.to_json())
            .map_err(|e| e.to_string())
    };
    let reference = bundle(table)?;
    for &row in split.test.iter().take(flips) {
        let mut flipped = table.clone();
        flipped.labels[row] = !flipped.labels[row];
        if bundle(&flipped)? != reference {
            return Err(format!("{kind}: flipping test row {row} changed the model"));
        }
    }
    let mut flipped = table.clone();
    let row = split.train[0];
    flipped.labels[row] = !flipped.labels[row];
    if bundle(&flipped)? == reference {
        return Err(format!("{kind}: flipping training row {row} left the model unchanged"));
    }
    Ok(())
}
