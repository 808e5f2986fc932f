use std::path::{Path, PathBuf};

use convabuse::corpus::SynthParams;
use convabuse::fusion::{ContextParams, FusionConfig, PipelineKind};
use convabuse::graphmetrics::GraphFeatureConfig;
use convabuse::learn::SvmParams;
use convabuse::select::DEFAULT_THRESHOLD;
use serde::{Deserialize, Serialize};

use crate::Failure;

pub const THREADS_ENV: &str = "CONVABUSE_THREADS";

/// Everything a run depends on. Read from a TOML file, then overridden by
/// command-line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub before: usize,
    pub after: usize,
    pub window_len: usize,
    pub kind: PipelineKind,
    pub c: f64,
    pub damping: f64,
    /// Master seed: dataset sampling, splits and internal folds.
    pub seed: u64,
    /// Master seeds evaluated (and averaged) by `eval`; `[seed]` when empty.
    pub seeds: Vec<u64>,
    pub out: PathBuf,
    /// Worker threads; 0 uses every available core.
    pub threads: usize,
    pub inner_folds: usize,
    /// Fraction of the full F-measure the Top Features must keep.
    pub tf_threshold: f64,
    pub synth: SynthParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        let context = ContextParams::default();
        RunConfig {
            corpus: None,
            lexicon: None,
            before: context.before,
            after: context.after,
            window_len: context.window_len,
            kind: PipelineKind::Late,
            c: SvmParams::default().c,
            damping: GraphFeatureConfig::default().damping,
            seed: 42,
            seeds: Vec::new(),
            out: PathBuf::from("out"),
            threads: 0,
            inner_folds: FusionConfig::default().inner_folds,
            tf_threshold: DEFAULT_THRESHOLD,
            synth: SynthParams::default(),
        }
    }
}

impl RunConfig {
    /// Parses a TOML file; relative paths in it are taken relative to the
    /// file's directory.
    pub fn from_file(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        let mut config: RunConfig = toml::from_str(&text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        config.corpus.as_mut().map(rebase);
        config.lexicon.as_mut().map(rebase);
        rebase(&mut config.out);
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        let bad = |m: String| Err(Failure::Usage(m));
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad(format!("c must be positive, got {}", self.c));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return bad(format!("damping must lie in (0, 1), got {}", self.damping));
        }
        if self.window_len < 2 {
            return bad(format!("window_len must be at least 2, got {}", self.window_len));
        }
        if self.inner_folds < 2 {
            return bad(format!("inner_folds must be at least 2, got {}", self.inner_folds));
        }
        if !(0.0..=1.0).contains(&self.tf_threshold) {
            return bad(format!("tf_threshold must lie in [0, 1], got {}", self.tf_threshold));
        }
        self.synth.validate().map_err(|e| Failure::Usage(e.to_string()))
    }

    pub fn master_seeds(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            vec![self.seed]
        } else {
            self.seeds.clone()
        }
    }

    pub fn context(&self) -> ContextParams {
        ContextParams {
            before: self.before,
            after: self.after,
            window_len: self.window_len,
        }
    }

    pub fn graph_config(&self) -> GraphFeatureConfig {
        GraphFeatureConfig {
            damping: self.damping,
            ..GraphFeatureConfig::default()
        }
    }

    pub fn fusion(&self, seed: u64) -> FusionConfig {
        FusionConfig {
            svm: SvmParams {
                c: self.c,
                ..SvmParams::default()
            },
            inner_folds: self.inner_folds,
            seed,
            ..FusionConfig::default()
        }
    }

    /// Worker threads after the environment override.
    pub fn thread_count(&self) -> Result<usize, Failure> {
        match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{THREADS_ENV}={v:?} is not a thread count"))),
            Err(_) => Ok(self.threads),
        }
    }
}
