//! Full replication run: corpus → lemmas → lexicon → (embeddings) → arcs.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::arcs::{smooth_arc, write_arc_csv, write_totals_tsv, DocumentScore, EmotionArc, Scorer};
use crate::config::{RunConfig, RunMetadata};
use crate::embeddings::{propose_expansions, train_sgns, write_proposals_jsonl, EmbeddingModel};
use crate::error::{Error, Result};
use crate::ingest::{document_id, ingest_book, ChapterPatterns, Discarded, Metadata, RawBook};
use crate::lexicon::{lexicon_stats, Lexicon, LoadOptions};
use crate::plot::emit_arc_svg;
use crate::textproc::{corpus_stats, read_conllu, LemmaSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExitStatus {
    Success = 0,
    Partial = 1,
    ConfigError = 2,
    EmptyCorpus = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// One book ready for scoring.
#[derive(Debug, Clone)]
pub struct CorpusBook {
    pub id: String,
    pub metadata: Metadata,
    pub lemmas: LemmaSequence,
}

impl CorpusBook {
    pub fn title(&self) -> &str {
        self.metadata.title.as_deref().unwrap_or(&self.id)
    }
}

#[derive(Debug, Default)]
struct Source {
    text: Option<PathBuf>,
    conllu: Option<PathBuf>,
}

fn extension(p: &Path) -> Option<String> {
    p.extension().map(|e| e.to_string_lossy().to_lowercase())
}

/// Groups `.txt` and `.conllu` files by stem. When both exist for a stem the
/// CoNLL-U file supplies the lemmas and the text file the metadata.
fn collect_sources(paths: &[PathBuf]) -> Result<BTreeMap<String, Source>> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            for entry in fs::read_dir(path).map_err(|e| Error::io(path, e))? {
                let p = entry.map_err(|e| Error::io(path, e))?.path();
                if p.is_file() {
                    files.push(p);
                }
            }
        } else {
            files.push(path.clone());
        }
    }
    let mut sources: BTreeMap<String, Source> = BTreeMap::new();
    for f in files {
        let id = document_id(&f);
        match extension(&f).as_deref() {
            Some("txt") => sources.entry(id).or_default().text = Some(f),
            Some("conllu") => sources.entry(id).or_default().conllu = Some(f),
            _ => {}
        }
    }
    Ok(sources)
}

fn load_book(id: &str, source: &Source, patterns: &ChapterPatterns) -> Result<CorpusBook> {
    let ingested = match &source.text {
        Some(path) => Some(ingest_book(&RawBook::read(path)?, patterns)?.0),
        None => None,
    };
    let lemmas = match (&source.conllu, &ingested) {
        (Some(path), _) => {
            let file = File::open(path).map_err(|e| Error::io(path, e))?;
            read_conllu(id, BufReader::new(file))?
        }
        (None, Some(doc)) => LemmaSequence::from_text(id, &doc.body),
        (None, None) => unreachable!("source has at least one file"),
    };
    Ok(CorpusBook {
        id: id.to_string(),
        metadata: ingested.map(|d| d.metadata).unwrap_or_default(),
        lemmas,
    })
}

/// Loads every book under the given paths; failures are returned as discards.
pub fn load_books(paths: &[PathBuf], patterns: &ChapterPatterns) -> Result<(Vec<CorpusBook>, Vec<Discarded>)> {
    let sources: Vec<(String, Source)> = collect_sources(paths)?.into_iter().collect();
    let results: Vec<(String, Result<CorpusBook>)> = sources
        .par_iter()
        .map(|(id, src)| (id.clone(), load_book(id, src, patterns)))
        .collect();
    let mut books = Vec::new();
    let mut discarded = Vec::new();
    for (id, r) in results {
        match r {
            Ok(b) => books.push(b),
            Err(e) => discarded.push(Discarded {
                file: id,
                reason: e.to_string(),
            }),
        }
    }
    Ok((books, discarded))
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp"));
    let mut f = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Serialize)]
struct ArcExport<'a> {
    metadata: &'a RunMetadata,
    arc: &'a EmotionArc,
}

#[derive(Debug, Serialize)]
struct BookSummary<'a> {
    id: &'a str,
    metadata: &'a Metadata,
    score: &'a DocumentScore,
    chunks: usize,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    metadata: &'a RunMetadata,
    corpus: crate::textproc::CorpusStats,
    lexicon: crate::lexicon::LexiconStats,
    books: Vec<BookSummary<'a>>,
    skipped: &'a [Discarded],
}

pub fn arc_json(arc: &EmotionArc, meta: &RunMetadata) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&ArcExport { metadata: meta, arc })?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub status: ExitStatus,
    pub books: usize,
    pub skipped: Vec<Discarded>,
    pub outputs: Vec<PathBuf>,
    pub message: Option<String>,
}

impl PipelineOutcome {
    fn failed(status: ExitStatus, message: String) -> Self {
        PipelineOutcome {
            status,
            books: 0,
            skipped: Vec::new(),
            outputs: Vec::new(),
            message: Some(message),
        }
    }
}

struct Scored<'a> {
    book: &'a CorpusBook,
    score: DocumentScore,
    arc: EmotionArc,
}

fn file_safe(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
        .collect()
}

/// Runs the whole pipeline. Never panics on bad input; the outcome's status
/// maps to the process exit code.
pub fn run_pipeline(config: &RunConfig) -> PipelineOutcome {
    if let Err(e) = config.validate() {
        return PipelineOutcome::failed(ExitStatus::ConfigError, e.to_string());
    }
    let patterns = match &config.chapter_patterns {
        Some(p) => ChapterPatterns::load(p),
        None => Ok(ChapterPatterns::default()),
    };
    let patterns = match patterns {
        Ok(p) => p,
        Err(e) => return PipelineOutcome::failed(ExitStatus::ConfigError, e.to_string()),
    };
    let lex_path = config.lexicon.as_ref().expect("validated");
    let lexicon = File::open(lex_path)
        .map_err(|e| Error::io(lex_path, e))
        .and_then(|f| {
            let opts = LoadOptions {
                emotions: config.emotions.clone(),
                dedupe: config.dedupe,
            };
            Lexicon::load(document_id(lex_path), BufReader::new(f), &opts)
        });
    let lexicon = match lexicon {
        Ok((lex, _)) => lex,
        Err(e) => return PipelineOutcome::failed(ExitStatus::ConfigError, e.to_string()),
    };
    match run_with(config, &lexicon, &patterns) {
        Ok(outcome) => outcome,
        Err(e) => PipelineOutcome::failed(ExitStatus::ConfigError, e.to_string()),
    }
}

fn run_with(config: &RunConfig, lexicon: &Lexicon, patterns: &ChapterPatterns) -> Result<PipelineOutcome> {
    let meta = RunMetadata::new(config);
    let (books, mut skipped) = load_books(&config.corpus, patterns)?;
    if books.is_empty() {
        let mut out = PipelineOutcome::failed(ExitStatus::EmptyCorpus, "corpus contains no readable books".into());
        out.skipped = skipped;
        return Ok(out);
    }

    let scorer = Scorer::new(lexicon);
    let chunking = config.chunking();
    let scored: Vec<std::result::Result<Scored<'_>, Discarded>> = books
        .par_iter()
        .map(|book| {
            let score = scorer.score_document(&book.lemmas, config.denominator)?;
            let mut arc = smooth_arc(&scorer.build_arc(&book.lemmas, chunking)?, config.smoothing_window)?;
            arc.title = Some(book.title().to_string());
            Ok(Scored { book, score, arc })
        })
        .map(|r: Result<Scored<'_>>| {
            r.map_err(|e| Discarded {
                file: String::new(),
                reason: e.to_string(),
            })
        })
        .collect();
    let mut ok = Vec::new();
    for (r, book) in scored.into_iter().zip(&books) {
        match r {
            Ok(s) => ok.push(s),
            Err(mut d) => {
                d.file = book.id.clone();
                skipped.push(d);
            }
        }
    }
    if ok.is_empty() {
        let mut out = PipelineOutcome::failed(ExitStatus::EmptyCorpus, "no book could be scored".into());
        out.skipped = skipped;
        return Ok(out);
    }

    let out_dir = &config.output;
    let comments = meta.comment_lines();
    let mut outputs = Vec::new();
    let mut emit = |path: PathBuf, bytes: Vec<u8>| -> Result<()> {
        write_atomic(&path, &bytes)?;
        outputs.push(path);
        Ok(())
    };

    let mut table = Vec::new();
    let rows: Vec<(String, &DocumentScore)> = ok.iter().map(|s| (s.book.title().to_string(), &s.score)).collect();
    write_totals_tsv(&mut table, &rows, lexicon.emotions(), &comments).map_err(|e| Error::io(out_dir, e))?;
    emit(out_dir.join("totals.tsv"), table)?;

    let subset = config.plot_subset();
    for s in &ok {
        let stem = file_safe(&s.book.id);
        let mut csv = Vec::new();
        write_arc_csv(&mut csv, &s.arc, &comments).map_err(|e| Error::io(out_dir, e))?;
        emit(out_dir.join("arcs").join(format!("{stem}.csv")), csv)?;
        emit(out_dir.join("arcs").join(format!("{stem}.json")), arc_json(&s.arc, &meta)?.into_bytes())?;
        if config.svg {
            let meta_json = serde_json::to_string(&meta)?;
            let svg = emit_arc_svg(&s.arc, &subset, Some(&meta_json))?;
            emit(out_dir.join("plots").join(format!("{stem}.svg")), svg.into_bytes())?;
        }
    }

    let seqs: Vec<LemmaSequence> = ok.iter().map(|s| s.book.lemmas.clone()).collect();
    let stats = corpus_stats(&seqs, config.expansion_candidates);
    if config.expand {
        let model = match &config.pretrained_vectors {
            Some(path) => {
                let file = File::open(path).map_err(|e| Error::io(path, e))?;
                EmbeddingModel::read_text(BufReader::new(file))?
            }
            None => train_sgns(&seqs, &meta.config.embedding)?,
        };
        let mut model_txt = Vec::new();
        model.write_text(&mut model_txt).map_err(|e| Error::io(out_dir, e))?;
        emit(out_dir.join("embeddings").join("model.txt"), model_txt)?;
        let model_meta = serde_json::json!({
            "metadata": &meta,
            "embedding": &model.config,
            "corpus_fingerprint": &model.corpus_fingerprint,
            "vocab_size": model.len(),
        });
        emit(
            out_dir.join("embeddings").join("model.json"),
            (serde_json::to_string_pretty(&model_meta)? + "\n").into_bytes(),
        )?;
        let candidates: Vec<String> = stats.top_frequent.iter().map(|(l, _)| l.clone()).collect();
        let report = propose_expansions(&model, lexicon, &candidates, config.expansion_threshold)?;
        let mut buf = Vec::new();
        write_proposals_jsonl(&mut buf, &report.proposals)?;
        emit(out_dir.join("embeddings").join("proposals.jsonl"), buf)?;
        let mut buf = Vec::new();
        write_proposals_jsonl(&mut buf, &report.near_misses)?;
        emit(out_dir.join("embeddings").join("near_misses.jsonl"), buf)?;
    }

    let mut corpus_summary = stats;
    corpus_summary.top_frequent.truncate(50);
    let summary = Summary {
        metadata: &meta,
        corpus: corpus_summary,
        lexicon: lexicon_stats(lexicon),
        books: ok
            .iter()
            .map(|s| BookSummary {
                id: &s.book.id,
                metadata: &s.book.metadata,
                score: &s.score,
                chunks: s.arc.len(),
            })
            .collect(),
        skipped: &skipped,
    };
    emit(
        out_dir.join("summary.json"),
        (serde_json::to_string_pretty(&summary)? + "\n").into_bytes(),
    )?;

    Ok(PipelineOutcome {
        status: if skipped.is_empty() {
            ExitStatus::Success
        } else {
            ExitStatus::Partial
        },
        books: ok.len(),
        skipped,
        outputs,
        message: None,
    })
}
