//! The `convabuse` command line: corpus ingestion, synthetic corpora,
//! featurization, training, evaluation, feature elimination and scoring.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use convabuse::content::BadWordLexicon;
use convabuse::corpus::{build_balanced_dataset, generate_synthetic, read_corpus, Corpus, SYNTH_LEXICON};
use convabuse::eval::{evaluate, make_splits, EvalReport, Metrics, Runtime};
use convabuse::fusion::{score_message, train_pipeline, FeatureTable, PipelineKind, TrainedPipeline};
use convabuse::graphmetrics::feature_manifest;
use convabuse::select::{late_top_features, rfe, top_features, EliminationTrace, TopFeatures};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

pub use config::{RunConfig, THREADS_ENV};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    /// Whoever read the output stopped reading.
    Closed,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Closed => 0,
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }
}

impl From<convabuse::Error> for Failure {
    fn from(e: convabuse::Error) -> Self {
        match e {
            convabuse::Error::Config(m) => Failure::Usage(m),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            Failure::Closed
        } else {
            Failure::Data(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "convabuse", version, about = "Abusive message detection from content and conversational graphs")]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a JSONL corpus and print ingestion statistics.
    Ingest(Common),
    /// Generate a seeded synthetic corpus and its lexicon.
    Synth(SynthArgs),
    /// Write the content and graph feature matrices of the balanced dataset.
    Featurize(Common),
    /// Train a pipeline on the whole balanced dataset.
    Train(Common),
    /// Run the repeated 70/30 split protocol.
    Eval(Common),
    /// Recursive feature elimination and Top Features.
    Rfe(Common),
    /// Score messages with a trained pipeline.
    Score(ScoreArgs),
    /// Print the ordered feature manifest of a pipeline.
    Manifest(ManifestArgs),
}

#[derive(Debug, Default, Args)]
struct Common {
    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    kind: Option<PipelineKind>,
    /// Messages of context before the target.
    #[arg(long)]
    before: Option<usize>,
    /// Messages of context after the target.
    #[arg(long)]
    after: Option<usize>,
    #[arg(long)]
    window_len: Option<usize>,
    /// SVM cost parameter.
    #[arg(long = "c", value_name = "C")]
    c: Option<f64>,
    /// PageRank damping factor.
    #[arg(long)]
    damping: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated master seeds (eval averages over them).
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    inner_folds: Option<usize>,
    /// Fraction of the full F-measure the Top Features must keep.
    #[arg(long)]
    tf_threshold: Option<f64>,
}

impl Common {
    fn apply(self, c: &mut RunConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { c.$f = v; })*};
        }
        set!(kind, before, after, window_len, c, damping, seed, seeds, out, threads, inner_folds, tf_threshold);
        if self.corpus.is_some() {
            c.corpus = self.corpus;
        }
        if self.lexicon.is_some() {
            c.lexicon = self.lexicon;
        }
    }
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    n_threads: Option<usize>,
    #[arg(long)]
    authors_per_thread: Option<usize>,
    #[arg(long)]
    messages_per_thread: Option<usize>,
    #[arg(long)]
    abuse_rate: Option<f64>,
    #[arg(long)]
    pile_on_size: Option<usize>,
    #[arg(long)]
    badword_injection_rate: Option<f64>,
    #[arg(long)]
    caps_rate: Option<f64>,
    #[arg(long)]
    decoy_rate: Option<f64>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    /// Pipeline bundle written by `train`.
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Messages to score (repeatable); every corpus message when absent.
    #[arg(long = "id", value_name = "MESSAGE_ID")]
    ids: Vec<String>,
    /// Write scores.jsonl here instead of printing them.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct ManifestArgs {
    #[arg(long)]
    kind: Option<PipelineKind>,
}

/// Runs the command line with the process arguments and standard streams.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}

/// Runs the command line on `args` (program name first) and returns the
/// exit code.
pub fn run_with<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                1
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(f) => {
            if let Failure::Usage(m) | Failure::Data(m) = &f {
                let _ = writeln!(err, "error: {m}");
            }
            f.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let mut command = cli.command;
    match &mut command {
        Command::Ingest(c) | Command::Featurize(c) | Command::Train(c) | Command::Eval(c) | Command::Rfe(c) => {
            std::mem::take(c).apply(&mut config)
        }
        Command::Synth(s) => {
            let p = &mut config.synth;
            macro_rules! set {
                ($($f:ident),*) => {$(if let Some(v) = s.$f { p.$f = v; })*};
            }
            set!(seed, n_threads, authors_per_thread, messages_per_thread, abuse_rate, pile_on_size, badword_injection_rate, caps_rate, decoy_rate);
            if let Some(o) = s.out.take() {
                config.out = o;
            }
        }
        Command::Score(s) => {
            if s.corpus.is_some() {
                config.corpus = s.corpus.take();
            }
            if s.lexicon.is_some() {
                config.lexicon = s.lexicon.take();
            }
            if let Some(t) = s.threads {
                config.threads = t;
            }
        }
        Command::Manifest(m) => {
            if let Some(k) = m.kind {
                config.kind = k;
            }
        }
    }
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.thread_count()?)
        .build()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match command {
        Command::Ingest(_) => ingest(&config, out),
        Command::Synth(_) => synth(&config, out),
        Command::Featurize(_) => featurize(&config, out, err),
        Command::Train(_) => train(&config, out, err),
        Command::Eval(_) => eval(&config, out, err),
        Command::Rfe(_) => select(&config, out, err),
        Command::Score(s) => score(&config, &s.model, &s.ids, s.out.as_deref(), out),
        Command::Manifest(_) => manifest(&config, out),
    })
}

/// Git-style object hash of a file: SHA-256 over `blob <len>\0<bytes>`.
pub fn file_hash(path: &Path) -> Result<String, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(&bytes);
    Ok(hex::encode(h.finalize()))
}

#[derive(Serialize)]
struct Echo<'a> {
    command: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    /// Input path → git-style SHA-256.
    inputs: BTreeMap<String, String>,
}

fn echo<'a>(command: &'a str, config: &'a RunConfig, inputs: &[&Path]) -> Result<Echo<'a>, Failure> {
    let inputs = inputs
        .iter()
        .map(|p| Ok((p.display().to_string(), file_hash(p)?)))
        .collect::<Result<_, Failure>>()?;
    Ok(Echo {
        command,
        version: env!("CARGO_PKG_VERSION"),
        config,
        inputs,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Data(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn out_dir(config: &RunConfig) -> Result<&Path, Failure> {
    fs::create_dir_all(&config.out).map_err(|e| Failure::Data(format!("{}: {e}", config.out.display())))?;
    Ok(&config.out)
}

fn corpus_path(config: &RunConfig) -> Result<&Path, Failure> {
    config
        .corpus
        .as_deref()
        .ok_or_else(|| Failure::Usage("no corpus given (--corpus or `corpus` in the config file)".into()))
}

fn load_corpus(config: &RunConfig) -> Result<Corpus, Failure> {
    Ok(read_corpus(corpus_path(config)?)?.0)
}

fn load_lexicon(config: &RunConfig, err: &mut (dyn Write + Send)) -> Result<BadWordLexicon, Failure> {
    match &config.lexicon {
        Some(p) => Ok(BadWordLexicon::from_path(p)?),
        None => {
            let _ = writeln!(err, "warning: no lexicon given; bad-word counts will be 0");
            Ok(BadWordLexicon::default())
        }
    }
}

fn inputs(config: &RunConfig) -> Vec<&Path> {
    config.corpus.iter().chain(&config.lexicon).map(PathBuf::as_path).collect()
}

fn table_for(corpus: &Corpus, lexicon: &BadWordLexicon, config: &RunConfig, seed: u64, err: &mut (dyn Write + Send)) -> Result<FeatureTable, Failure> {
    let dataset = build_balanced_dataset(corpus, seed)?;
    let table = FeatureTable::build(corpus, &dataset, lexicon, config.context(), config.graph_config())?;
    for (id, why) in &table.skipped {
        let _ = writeln!(err, "warning: skipped {id}: {why}");
    }
    Ok(table)
}

fn ingest(config: &RunConfig, out: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let (_, stats) = read_corpus(corpus_path(config)?)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&stats).map_err(|e| Failure::Data(e.to_string()))?)?;
    Ok(())
}

fn synth(config: &RunConfig, out: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let corpus = generate_synthetic(&config.synth)?;
    let dir = out_dir(config)?;
    let corpus_path = dir.join("corpus.jsonl");
    let mut w = create(&corpus_path)?;
    corpus.write_jsonl(&mut w)?;
    w.flush()?;
    let lexicon_path = dir.join("lexicon.txt");
    let mut w = create(&lexicon_path)?;
    for word in SYNTH_LEXICON {
        writeln!(w, "{word}")?;
    }
    w.flush()?;
    write_json(&dir.join("config.json"), &echo("synth", config, &[])?)?;
    let stats = corpus.stats();
    writeln!(
        out,
        "wrote {} ({} messages, {} threads, {} abuse) and {}",
        corpus_path.display(),
        stats.messages,
        stats.threads,
        stats.abuse,
        lexicon_path.display()
    )?;
    Ok(())
}

fn featurize(config: &RunConfig, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let corpus = load_corpus(config)?;
    let lexicon = load_lexicon(config, err)?;
    let table = table_for(&corpus, &lexicon, config, config.seed, err)?;
    let dir = out_dir(config)?;
    let (names, rows) = table.content_rows()?;
    let mut w = create(&dir.join("content.csv"))?;
    table.write_csv(&names, &rows, &mut w)?;
    w.flush()?;
    let mut w = create(&dir.join("graph.csv"))?;
    table.write_graph_csv(&mut w)?;
    w.flush()?;
    let flags: Vec<Vec<f64>> = table
        .graph_missing
        .iter()
        .map(|r| r.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut w = create(&dir.join("graph_missing.csv"))?;
    table.write_csv(&table.graph_manifest, &flags, &mut w)?;
    w.flush()?;
    write_json(&dir.join("config.json"), &echo("featurize", config, &inputs(config))?)?;
    writeln!(
        out,
        "featurized {} messages ({} content, {} graph features) into {}",
        table.len(),
        names.len(),
        table.graph_manifest.len(),
        dir.display()
    )?;
    Ok(())
}

fn train(config: &RunConfig, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let corpus = load_corpus(config)?;
    let lexicon = load_lexicon(config, err)?;
    let table = table_for(&corpus, &lexicon, config, config.seed, err)?;
    let all: Vec<usize> = (0..table.len()).collect();
    let model = train_pipeline(config.kind, &table, &all, &config.fusion(config.seed))?;
    let dir = out_dir(config)?;
    let path = dir.join("model.json");
    let mut w = create(&path)?;
    w.write_all(model.to_json()?.as_bytes())?;
    writeln!(w)?;
    w.flush()?;
    write_json(&dir.join("config.json"), &echo("train", config, &inputs(config))?)?;
    writeln!(out, "trained {} pipeline on {} messages: {}", config.kind, table.len(), path.display())?;
    Ok(())
}

#[derive(Serialize)]
struct Report<'a> {
    config: Echo<'a>,
    kind: PipelineKind,
    seeds: Vec<u64>,
    /// One evaluation per master seed.
    runs: Vec<EvalReport>,
    /// Mean over master seeds of the per-seed mean metrics.
    mean: Metrics,
}

#[derive(Serialize)]
struct SeedRuntime {
    seed: u64,
    featurize_seconds: f64,
    #[serde(flatten)]
    eval: Runtime,
}

fn eval(config: &RunConfig, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let corpus = load_corpus(config)?;
    let lexicon = load_lexicon(config, err)?;
    let seeds = config.master_seeds();
    let mut runs = Vec::new();
    let mut runtimes = Vec::new();
    for &seed in &seeds {
        let t = Instant::now();
        let table = table_for(&corpus, &lexicon, config, seed, err)?;
        let featurize_seconds = t.elapsed().as_secs_f64();
        let plan = make_splits(&table.labels, seed)?;
        let e = evaluate(config.kind, &table, &plan, &config.fusion(seed))?;
        let m = &e.report.mean;
        writeln!(
            out,
            "{} seed {seed}: P {:.4} R {:.4} F {:.4}",
            config.kind, m.precision, m.recall, m.f_measure
        )?;
        runs.push(e.report);
        runtimes.push(SeedRuntime {
            seed,
            featurize_seconds,
            eval: e.runtime,
        });
    }
    let k = runs.len() as f64;
    let mean = Metrics {
        precision: runs.iter().map(|r| r.mean.precision).sum::<f64>() / k,
        recall: runs.iter().map(|r| r.mean.recall).sum::<f64>() / k,
        f_measure: runs.iter().map(|r| r.mean.f_measure).sum::<f64>() / k,
    };
    let dir = out_dir(config)?;
    let report = Report {
        config: echo("eval", config, &inputs(config))?,
        kind: config.kind,
        seeds,
        runs,
        mean,
    };
    write_json(&dir.join("report.json"), &report)?;
    write_json(&dir.join("runtime.json"), &runtimes)?;
    writeln!(out, "{}: mean F {:.4} -> {}", config.kind, mean.f_measure, dir.join("report.json").display())?;
    Ok(())
}

fn write_trace(dir: &Path, trace: &EliminationTrace) -> Result<(), Failure> {
    let mut w = create(&dir.join(format!("rfe_{}.csv", trace.kind)))?;
    trace.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn select(config: &RunConfig, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let corpus = load_corpus(config)?;
    let lexicon = load_lexicon(config, err)?;
    let table = table_for(&corpus, &lexicon, config, config.seed, err)?;
    let plan = make_splits(&table.labels, config.seed)?;
    let fusion = config.fusion(config.seed);
    let dir = out_dir(config)?.to_path_buf();
    let mut eliminate = |kind: PipelineKind| -> Result<(EliminationTrace, TopFeatures), Failure> {
        let trace = rfe(kind, &table, &plan, &fusion)?;
        write_trace(&dir, &trace)?;
        let tf = top_features(&trace, config.tf_threshold);
        if let Some(w) = &tf.warning {
            let _ = writeln!(err, "warning: {kind}: {w}");
        }
        writeln!(out, "{kind}: {} Top Features, F {:.4} (full {:.4})", tf.features.len(), tf.f_measure, trace.full_f)?;
        Ok((trace, tf))
    };
    let summary = if config.kind == PipelineKind::Late {
        let (ct, ctf) = eliminate(PipelineKind::Content)?;
        let (gt, gtf) = eliminate(PipelineKind::Graph)?;
        let late = late_top_features(&fusion, &ctf.features, &gtf.features);
        let f = evaluate(PipelineKind::Late, &table, &plan, &late)?.report.mean.f_measure;
        let full_f = evaluate(PipelineKind::Late, &table, &plan, &fusion)?.report.mean.f_measure;
        writeln!(out, "late: {} Top Features, F {f:.4} (full {full_f:.4})", ctf.features.len() + gtf.features.len())?;
        let union = [ctf.features.clone(), gtf.features.clone()].concat();
        json!({
            "kind": "late",
            "features": union,
            "f_measure": f,
            "full_f": full_f,
            "content": { "top": ctf, "full_f": ct.full_f },
            "graph": { "top": gtf, "full_f": gt.full_f },
        })
    } else {
        let (trace, tf) = eliminate(config.kind)?;
        json!({
            "kind": config.kind,
            "features": tf.features,
            "f_measure": tf.f_measure,
            "full_f": trace.full_f,
            "warning": tf.warning,
        })
    };
    write_json(&dir.join("top_features.json"), &summary)?;
    write_json(&dir.join("config.json"), &echo("rfe", config, &inputs(config))?)?;
    Ok(())
}

#[derive(Serialize)]
struct ScoreLine<'a> {
    message_id: &'a str,
    probability: f64,
    abuse: bool,
}

fn score(config: &RunConfig, model: &Path, ids: &[String], dest: Option<&Path>, out: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let text = fs::read_to_string(model).map_err(|e| Failure::Data(format!("{}: {e}", model.display())))?;
    let pipeline = TrainedPipeline::from_json(&text)?;
    let corpus = load_corpus(config)?;
    let lexicon = load_lexicon(config, &mut std::io::sink())?;
    let ids: Vec<String> = if ids.is_empty() {
        corpus.messages().map(|m| m.message_id.clone()).collect()
    } else {
        ids.to_vec()
    };
    use rayon::prelude::*;
    let scores: Vec<_> = ids
        .par_iter()
        .map(|id| score_message(&pipeline, &corpus, id, &lexicon))
        .collect::<Result<_, _>>()?;
    let mut lines = Vec::new();
    for (id, s) in ids.iter().zip(scores) {
        let line = ScoreLine {
            message_id: id,
            probability: s.probability,
            abuse: s.abuse,
        };
        writeln!(lines, "{}", serde_json::to_string(&line).map_err(|e| Failure::Data(e.to_string()))?)?;
    }
    match dest {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::Data(format!("{}: {e}", dir.display())))?;
            let mut w = create(&dir.join("scores.jsonl"))?;
            w.write_all(&lines)?;
            w.flush()?;
        }
        None => out.write_all(&lines)?,
    }
    Ok(())
}

fn manifest(config: &RunConfig, out: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let graph = feature_manifest(&config.graph_config());
    for n in config.kind.manifest(&graph) {
        writeln!(out, "{n}")?;
    }
    Ok(())
}
