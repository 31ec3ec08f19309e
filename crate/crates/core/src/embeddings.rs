//! Skip-gram with negative sampling word vectors and nearest-neighbour
//! lexicon expansion.
//!
//! Training is sequential and driven by a single seeded ChaCha8 stream, so a
//! fixed seed, corpus and config always produce bit-identical vectors.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::emotion::Emotion;
use crate::error::{Error, Result};
use crate::lexicon::{EditCommand, Lexicon};
use crate::textproc::LemmaSequence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct EmbeddingConfig {
    pub dimension: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub min_count: usize,
    pub subsample_threshold: f64,
    /// Initial rate, decayed linearly to 1e-4 of itself over training.
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            dimension: 100,
            window: 5,
            negatives: 5,
            epochs: 5,
            min_count: 5,
            subsample_threshold: 1e-4,
            learning_rate: 0.025,
            seed: 0,
        }
    }
}

impl EmbeddingConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dimension", self.dimension),
            ("window", self.window),
            ("negatives", self.negatives),
            ("epochs", self.epochs),
            ("min-count", self.min_count),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("embedding {name} must be positive")));
        }
        if !(self.subsample_threshold > 0.0 && self.learning_rate > 0.0) {
            return Err(Error::Config(
                "embedding subsample-threshold and learning-rate must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    words: Vec<String>,
    index: HashMap<String, usize>,
    vectors: Vec<f32>,
    dimension: usize,
    /// Absent for models loaded from a vector file.
    pub config: Option<EmbeddingConfig>,
    pub corpus_fingerprint: Option<String>,
}

impl EmbeddingModel {
    pub fn from_parts(words: Vec<String>, vectors: Vec<f32>, dimension: usize) -> Result<Self> {
        if dimension == 0 || vectors.len() != words.len() * dimension {
            return Err(Error::Dim(vectors.len(), words.len() * dimension));
        }
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect::<HashMap<_, _>>();
        if index.len() != words.len() {
            return Err(Error::Config("duplicate word in embedding vocabulary".into()));
        }
        Ok(EmbeddingModel {
            words,
            index,
            vectors,
            dimension,
            config: None,
            corpus_fingerprint: None,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn vector(&self, word: &str) -> Option<&[f32]> {
        self.index.get(word).map(|&i| self.row(i))
    }

    fn row(&self, i: usize) -> &[f32] {
        &self.vectors[i * self.dimension..(i + 1) * self.dimension]
    }

    /// Text format: `<vocab_size> <dimension>` then `word v1 … vd` per line.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.words.len(), self.dimension)?;
        for (i, word) in self.words.iter().enumerate() {
            write!(w, "{word}")?;
            for x in self.row(i) {
                write!(w, " {x}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing header line".into()))?;
        let header = header.map_err(|e| parse_err(1, e.to_string()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(1, format!("bad header: {e}")))?;
        let [vocab_size, dimension] = dims[..] else {
            return Err(parse_err(1, "header must be `<vocab_size> <dimension>`".into()));
        };
        let mut words = Vec::with_capacity(vocab_size);
        let mut vectors = Vec::with_capacity(vocab_size * dimension);
        for (idx, line) in lines {
            let line_no = idx + 1;
            let line = line.map_err(|e| parse_err(line_no, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let word = parts.next().unwrap_or_default().to_string();
            let before = vectors.len();
            for p in parts {
                vectors.push(
                    p.parse::<f32>()
                        .map_err(|e| parse_err(line_no, format!("bad float `{p}`: {e}")))?,
                );
            }
            if vectors.len() - before != dimension {
                return Err(parse_err(
                    line_no,
                    format!("expected {dimension} values, found {}", vectors.len() - before),
                ));
            }
            words.push(word);
        }
        if words.len() != vocab_size {
            return Err(parse_err(
                1,
                format!("header announces {vocab_size} words, file has {}", words.len()),
            ));
        }
        EmbeddingModel::from_parts(words, vectors, dimension)
    }
}

/// Cosine similarity, computed in `f64`.
pub fn cosine<T: Copy + Into<f64>>(u: &[T], v: &[T]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dim(u.len(), v.len()));
    }
    let (mut dot, mut nu, mut nv) = (0.0f64, 0.0f64, 0.0f64);
    for (&a, &b) in u.iter().zip(v) {
        let (a, b): (f64, f64) = (a.into(), b.into());
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

/// SHA-256 over the word-lemma stream, sentences separated by blank lines.
pub fn corpus_fingerprint(seqs: &[LemmaSequence]) -> String {
    let mut hasher = Sha256::new();
    for seq in seqs {
        let mut start = 0;
        for &end in &seq.sentence_boundaries {
            for t in seq.tokens[start..end].iter().filter(|t| t.is_word) {
                hasher.update(t.lemma.as_bytes());
                hasher.update(b"\n");
            }
            hasher.update(b"\n");
            start = end;
        }
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn sentences(seq: &LemmaSequence) -> impl Iterator<Item = &[crate::textproc::Token]> + '_ {
    let mut start = 0;
    let mut bounds = seq.sentence_boundaries.clone();
    if bounds.last().copied().unwrap_or(0) < seq.tokens.len() {
        bounds.push(seq.tokens.len());
    }
    bounds.into_iter().map(move |end| {
        let s = &seq.tokens[start..end];
        start = end;
        s
    })
}

pub fn train_sgns(seqs: &[LemmaSequence], cfg: &EmbeddingConfig) -> Result<EmbeddingModel> {
    cfg.validate()?;
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for seq in seqs {
        for t in seq.words() {
            *counts.entry(t.lemma.as_str()).or_default() += 1;
        }
    }
    let mut vocab: Vec<(&str, u64)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= cfg.min_count as u64)
        .collect();
    if vocab.is_empty() {
        return Err(Error::EmptyVocab(cfg.min_count));
    }
    vocab.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let index: HashMap<&str, usize> = vocab.iter().enumerate().map(|(i, (w, _))| (*w, i)).collect();
    let freq: Vec<u64> = vocab.iter().map(|(_, c)| *c).collect();
    let train_words: u64 = freq.iter().sum();

    let corpus: Vec<Vec<usize>> = seqs
        .iter()
        .flat_map(sentences)
        .map(|s| {
            s.iter()
                .filter(|t| t.is_word)
                .filter_map(|t| index.get(t.lemma.as_str()).copied())
                .collect::<Vec<_>>()
        })
        .filter(|s| !s.is_empty())
        .collect();

    // unigram^0.75 cumulative distribution for negative sampling
    let mut cumulative = Vec::with_capacity(freq.len());
    let mut acc = 0.0f64;
    for &c in &freq {
        acc += (c as f64).powf(0.75);
        cumulative.push(acc);
    }
    let total_weight = acc;

    let dim = cfg.dimension;
    let n = vocab.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut syn0: Vec<f32> = (0..n * dim)
        .map(|_| ((rng.random::<f64>() - 0.5) / dim as f64) as f32)
        .collect();
    let mut syn1 = vec![0.0f32; n * dim];
    let mut grad = vec![0.0f32; dim];

    let threshold = cfg.subsample_threshold * train_words as f64;
    let keep_prob: Vec<f64> = freq
        .iter()
        .map(|&c| {
            let c = c as f64;
            (((c / threshold).sqrt() + 1.0) * threshold / c).min(1.0)
        })
        .collect();

    let total_steps = (cfg.epochs as u64 * train_words) as f64;
    let mut processed = 0u64;
    let mut kept = Vec::new();
    for _ in 0..cfg.epochs {
        for sentence in &corpus {
            processed += sentence.len() as u64;
            let lr = (cfg.learning_rate * (1.0 - processed as f64 / (total_steps + 1.0)))
                .max(cfg.learning_rate * 1e-4) as f32;
            kept.clear();
            for &w in sentence {
                if keep_prob[w] >= 1.0 || rng.random::<f64>() < keep_prob[w] {
                    kept.push(w);
                }
            }
            for (pos, &center) in kept.iter().enumerate() {
                let reduced = rng.random_range(0..cfg.window);
                let span = cfg.window - reduced;
                let lo = pos.saturating_sub(span);
                let hi = (pos + span).min(kept.len() - 1);
                for (ctx_pos, &context) in kept.iter().enumerate().take(hi + 1).skip(lo) {
                    if ctx_pos == pos {
                        continue;
                    }
                    grad.iter_mut().for_each(|g| *g = 0.0);
                    let input = context * dim;
                    for d in 0..=cfg.negatives {
                        let (target, label) = if d == 0 {
                            (center, 1.0f32)
                        } else {
                            let r = rng.random::<f64>() * total_weight;
                            let t = cumulative.partition_point(|&c| c <= r).min(n - 1);
                            if t == center {
                                continue;
                            }
                            (t, 0.0f32)
                        };
                        let out = target * dim;
                        let dot: f32 = (0..dim).map(|k| syn0[input + k] * syn1[out + k]).sum();
                        let g = (label - sigmoid(dot)) * lr;
                        for k in 0..dim {
                            grad[k] += g * syn1[out + k];
                            syn1[out + k] += g * syn0[input + k];
                        }
                    }
                    for k in 0..dim {
                        syn0[input + k] += grad[k];
                    }
                }
            }
        }
    }

    let mut model = EmbeddingModel::from_parts(
        vocab.iter().map(|(w, _)| w.to_string()).collect(),
        syn0,
        dim,
    )?;
    model.config = Some(cfg.clone());
    model.corpus_fingerprint = Some(corpus_fingerprint(seqs));
    Ok(model)
}

fn sigmoid(x: f32) -> f32 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProposalStatus {
    #[default]
    Pending,
    Accepted,
    Rejected,
}

/// Copy `source`'s lexicon entries to `candidate`. The candidate lemma is the
/// proposal id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionProposal {
    pub candidate: String,
    pub source: String,
    pub cosine: f64,
    pub proposed_entries: Vec<(Emotion, f64)>,
    #[serde(default)]
    pub status: ProposalStatus,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub threshold: f64,
    pub proposals: Vec<ExpansionProposal>,
    /// Best matches below the threshold, for curator review.
    pub near_misses: Vec<ExpansionProposal>,
    pub already_in_lexicon: Vec<String>,
    pub not_in_vocab: Vec<String>,
}

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// For each candidate missing from `lex` but present in the model, finds the
/// lexicon lemma with the highest cosine (exact scan, ties to the
/// lexicographically smaller lemma).
pub fn propose_expansions(
    model: &EmbeddingModel,
    lex: &Lexicon,
    candidates: &[String],
    threshold: f64,
) -> Result<ExpansionReport> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::Config(format!("expansion threshold {threshold} not in (0, 1]")));
    }
    let sources: Vec<(&str, &[f32])> = lex
        .lemmas()
        .filter_map(|l| model.vector(l).map(|v| (l, v)))
        .collect();

    let mut report = ExpansionReport {
        threshold,
        ..Default::default()
    };
    let mut seen = HashSet::new();
    for candidate in candidates {
        if !seen.insert(candidate.as_str()) {
            continue;
        }
        if lex.contains_lemma(candidate) {
            report.already_in_lexicon.push(candidate.clone());
            continue;
        }
        let Some(cv) = model.vector(candidate) else {
            report.not_in_vocab.push(candidate.clone());
            continue;
        };
        let mut best: Option<(&str, f64)> = None;
        for &(lemma, sv) in &sources {
            let Ok(c) = cosine(cv, sv) else { continue };
            if best.is_none_or(|(_, b)| c > b) {
                best = Some((lemma, c));
            }
        }
        let Some((source, cos)) = best else { continue };
        let proposal = ExpansionProposal {
            candidate: candidate.clone(),
            source: source.to_string(),
            cosine: cos,
            proposed_entries: lex.lemma_entries(source).collect(),
            status: ProposalStatus::Pending,
        };
        if cos >= threshold {
            report.proposals.push(proposal);
        } else {
            report.near_misses.push(proposal);
        }
    }
    let by_cosine = |a: &ExpansionProposal, b: &ExpansionProposal| {
        b.cosine
            .total_cmp(&a.cosine)
            .then_with(|| a.candidate.cmp(&b.candidate))
    };
    report.proposals.sort_by(by_cosine);
    report.near_misses.sort_by(by_cosine);
    Ok(report)
}

/// Applies accepted proposals as embedding-sourced copies. Returns the new
/// lexicon and the proposals with their final status.
pub fn apply_proposals(
    lex: &Lexicon,
    proposals: &[ExpansionProposal],
    accepted: &[String],
) -> Result<(Lexicon, Vec<ExpansionProposal>)> {
    let ids: HashSet<&str> = proposals.iter().map(|p| p.candidate.as_str()).collect();
    if let Some(unknown) = accepted.iter().find(|a| !ids.contains(a.as_str())) {
        return Err(Error::Config(format!("accepted id `{unknown}` matches no proposal")));
    }
    let accepted: HashSet<&str> = accepted.iter().map(String::as_str).collect();
    let mut out = lex.clone();
    let mut decided = Vec::with_capacity(proposals.len());
    for p in proposals {
        let mut p = p.clone();
        if accepted.contains(p.candidate.as_str()) {
            out = out.edit(EditCommand::CopyEntries {
                source: p.source.clone(),
                target: p.candidate.clone(),
                cosine: Some(p.cosine),
            })?;
            p.status = ProposalStatus::Accepted;
        } else {
            p.status = ProposalStatus::Rejected;
        }
        decided.push(p);
    }
    Ok((out, decided))
}

pub fn write_proposals_jsonl<W: Write>(mut w: W, proposals: &[ExpansionProposal]) -> Result<()> {
    for p in proposals {
        serde_json::to_writer(&mut w, p)?;
        w.write_all(b"\n").map_err(|e| Error::io("<proposals>", e))?;
    }
    Ok(())
}

pub fn read_proposals_jsonl<R: BufRead>(reader: R) -> Result<Vec<ExpansionProposal>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

/// One accepted candidate lemma per line; `#` comments allowed.
pub fn read_accepted<R: BufRead>(reader: R) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io("<accepted>", e))?;
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('#') {
            out.push(t.to_string());
        }
    }
    Ok(out)
}
