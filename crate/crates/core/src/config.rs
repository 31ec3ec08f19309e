//! Run configuration, read from TOML. Keys use the same kebab-case names as
//! the `run` command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::arcs::{Chunking, Denominator, DEFAULT_CHUNKS, DEFAULT_SMOOTHING};
use crate::embeddings::{EmbeddingConfig, DEFAULT_THRESHOLD};
use crate::emotion::{Emotion, EmotionSet};
use crate::error::{Error, Result};
use crate::lexicon::Dedupe;

pub const TOOL_NAME: &str = "emoarc";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    /// Directories or files (`.txt` Gutenberg texts, `.conllu` parses).
    pub corpus: Vec<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub emotions: EmotionSet,
    pub dedupe: Dedupe,
    /// Count-based chunking; ignored when `window-tokens` is set.
    pub chunks: usize,
    pub window_tokens: Option<usize>,
    pub smoothing_window: usize,
    pub denominator: Denominator,
    pub svg: bool,
    /// Emotions drawn in SVG plots; all active emotions when empty.
    pub plot_emotions: Vec<Emotion>,
    pub chapter_patterns: Option<PathBuf>,
    /// Train embeddings and write expansion proposals for review.
    pub expand: bool,
    pub expansion_threshold: f64,
    pub expansion_candidates: usize,
    pub embedding: EmbeddingConfig,
    /// Word vectors in text format to use instead of training.
    pub pretrained_vectors: Option<PathBuf>,
    pub output: PathBuf,
    /// Seed for every stochastic stage.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: Vec::new(),
            lexicon: None,
            emotions: EmotionSet::default(),
            dedupe: Dedupe::Error,
            chunks: DEFAULT_CHUNKS,
            window_tokens: None,
            smoothing_window: DEFAULT_SMOOTHING,
            denominator: Denominator::Words,
            svg: true,
            plot_emotions: Vec::new(),
            chapter_patterns: None,
            expand: false,
            expansion_threshold: DEFAULT_THRESHOLD,
            expansion_candidates: 2000,
            embedding: EmbeddingConfig::default(),
            pretrained_vectors: None,
            output: PathBuf::from("out"),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("RunConfig serializes to TOML")
    }

    pub fn chunking(&self) -> Chunking {
        match self.window_tokens {
            Some(window_tokens) => Chunking::Window { window_tokens },
            None => Chunking::Count { n_chunks: self.chunks },
        }
    }

    pub fn plot_subset(&self) -> Vec<Emotion> {
        if self.plot_emotions.is_empty() {
            self.emotions.iter().collect()
        } else {
            self.plot_emotions.clone()
        }
    }

    /// Config with derived values filled in (embedding seed follows `seed`).
    pub fn resolved(&self) -> Self {
        let mut cfg = self.clone();
        cfg.embedding.seed = cfg.seed;
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let lexicon = self
            .lexicon
            .as_ref()
            .ok_or_else(|| Error::Config("no lexicon given".into()))?;
        if !lexicon.is_file() {
            return Err(Error::Config(format!("lexicon {} does not exist", lexicon.display())));
        }
        if self.corpus.is_empty() {
            return Err(Error::Config("no corpus paths given".into()));
        }
        if let Some(p) = self.corpus.iter().find(|p| !p.exists()) {
            return Err(Error::Config(format!("corpus path {} does not exist", p.display())));
        }
        if let Some(p) = self.chapter_patterns.as_ref().filter(|p| !p.is_file()) {
            return Err(Error::Config(format!("chapter pattern file {} does not exist", p.display())));
        }
        if let Some(p) = self.pretrained_vectors.as_ref().filter(|p| !p.is_file()) {
            return Err(Error::Config(format!("vector file {} does not exist", p.display())));
        }
        if self.emotions.is_empty() {
            return Err(Error::Config("emotion set is empty".into()));
        }
        if self.window_tokens == Some(0) || (self.window_tokens.is_none() && self.chunks == 0) {
            return Err(Error::Config("chunking parameter must be at least 1".into()));
        }
        if self.smoothing_window == 0 || self.smoothing_window % 2 == 0 {
            return Err(Error::Config(format!(
                "smoothing-window must be an odd positive integer, got {}",
                self.smoothing_window
            )));
        }
        if let Some(e) = self.plot_emotions.iter().find(|e| !self.emotions.contains(**e)) {
            return Err(Error::Config(format!("plot emotion `{e}` is not in the active set")));
        }
        if !(self.expansion_threshold > 0.0 && self.expansion_threshold <= 1.0) {
            return Err(Error::Config("expansion-threshold must be in (0, 1]".into()));
        }
        self.embedding.validate()
    }
}

/// Provenance block embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
}

impl RunMetadata {
    pub fn new(config: &RunConfig) -> Self {
        RunMetadata {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            config: config.resolved(),
        }
    }

    /// Comment lines for CSV/TSV outputs.
    pub fn comment_lines(&self) -> Vec<String> {
        vec![
            format!("{} {}", self.tool, self.version),
            format!(
                "config {}",
                serde_json::to_string(&self.config).expect("config serializes to JSON")
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_kebab_case_toml() {
        let cfg = RunConfig::from_toml_str(
            r#"
corpus = ["books"]
lexicon = "lex.tsv"
emotions = ["joy", "fear"]
smoothing-window = 3
window-tokens = 500
seed = 9

[embedding]
dimension = 20
min-count = 2
"#,
        )
        .unwrap();
        assert_eq!(cfg.smoothing_window, 3);
        assert_eq!(cfg.chunking(), Chunking::Window { window_tokens: 500 });
        assert_eq!(cfg.emotions.names(), ["fear", "joy"]);
        assert_eq!(cfg.embedding.dimension, 20);
        assert_eq!(cfg.embedding.window, 5);
        assert_eq!(cfg.resolved().embedding.seed, 9);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(RunConfig::from_toml_str("colour = 1").is_err());
        assert!(RunConfig::from_toml_str("emotions = [\"happiness\"]").is_err());
        let cfg = RunConfig::default();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn toml_round_trip() {
        let cfg = RunConfig {
            lexicon: Some("x.tsv".into()),
            corpus: vec!["a".into()],
            ..Default::default()
        };
        assert_eq!(RunConfig::from_toml_str(&cfg.to_toml_string()).unwrap(), cfg);
    }
}
