use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use emoarc::arcs::{smooth_arc, write_arc_csv, Chunking, Denominator, Scorer, DEFAULT_CHUNKS, DEFAULT_SMOOTHING};
use emoarc::config::{RunConfig, RunMetadata};
use emoarc::embeddings::{
    apply_proposals, propose_expansions, read_accepted, read_proposals_jsonl, train_sgns, write_proposals_jsonl,
    EmbeddingConfig, EmbeddingModel, DEFAULT_THRESHOLD,
};
use emoarc::emotion::{Emotion, EmotionSet};
use emoarc::error::Error;
use emoarc::ingest::{load_corpus, ChapterPatterns};
use emoarc::lexicon::{lexicon_stats, read_edit_log, Dedupe, EditCommand, Lexicon, LoadOptions};
use emoarc::pipeline::{arc_json, load_books, run_pipeline, write_atomic, CorpusBook, ExitStatus};
use emoarc::plot::emit_arc_svg;
use emoarc::stats::permutation_test;
use emoarc::textproc::{corpus_stats, lemma_frequencies, rank_frequencies, write_frequency_tsv, LemmaSequence};
use emoarc::EmotionArc;

#[derive(Parser)]
#[command(name = "emoarc", version, about = "Lexicon-based emotion arcs for literary corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Strip Gutenberg boilerplate, extract metadata and split chapters.
    Ingest(IngestArgs),
    /// Token, type and frequency statistics for a corpus.
    Stats(StatsArgs),
    /// Validate, inspect or edit an emotion lexicon.
    #[command(subcommand)]
    Lex(LexCommand),
    /// Train embeddings and manage lexicon expansion proposals.
    #[command(subcommand)]
    Embed(EmbedCommand),
    /// Compute the chunked emotion arc of one book.
    Arc(ArcArgs),
    /// Permutation test for the difference in one emotion between two books.
    Compare(CompareArgs),
    /// Render an arc JSON file as SVG.
    Plot(PlotArgs),
    /// Run the full pipeline from a TOML config.
    Run(RunArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Directory of Gutenberg `.txt` files.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long)]
    chapter_patterns: Option<PathBuf>,
}

#[derive(Args)]
struct CorpusArgs {
    /// Text or CoNLL-U files, or directories of them.
    #[arg(long, num_args = 1.., required = true)]
    corpus: Vec<PathBuf>,
    #[arg(long)]
    chapter_patterns: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Number of most frequent lemmas to list.
    #[arg(long, default_value_t = 50)]
    top: usize,
    /// Write the full lemma frequency table here.
    #[arg(long)]
    frequencies: Option<PathBuf>,
}

#[derive(Args)]
struct LexArgs {
    #[arg(long)]
    lexicon: PathBuf,
    /// Comma-separated active emotions.
    #[arg(long)]
    emotions: Option<String>,
    /// Keep the maximum intensity for duplicate rows instead of failing.
    #[arg(long)]
    keep_max: bool,
}

#[derive(Subcommand)]
enum LexCommand {
    Validate(LexArgs),
    Stats(LexArgs),
    Edit(LexEditArgs),
}

#[derive(Args)]
struct LexEditArgs {
    #[command(flatten)]
    lex: LexArgs,
    /// `lemma:emotion:intensity`
    #[arg(long)]
    add: Vec<String>,
    #[arg(long)]
    remove: Vec<String>,
    /// `source:target`
    #[arg(long)]
    copy: Vec<String>,
    /// JSONL file of edit commands, applied after the flags.
    #[arg(long)]
    commands: Option<PathBuf>,
    #[arg(long)]
    output: PathBuf,
    /// Write the edit log (JSONL) here.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Subcommand)]
enum EmbedCommand {
    Train(EmbedTrainArgs),
    Propose(EmbedProposeArgs),
    Apply(EmbedApplyArgs),
}

#[derive(Args)]
struct EmbedTrainArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    dimension: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    negatives: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    min_count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Model in word2vec text format; a `.json` sidecar records the config.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct EmbedProposeArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    lex: LexArgs,
    #[command(flatten)]
    corpus: CorpusArgs,
    /// How many of the most frequent corpus lemmas to consider.
    #[arg(long, default_value_t = 2000)]
    candidates: usize,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    near_misses: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedApplyArgs {
    #[command(flatten)]
    lex: LexArgs,
    #[arg(long)]
    proposals: PathBuf,
    /// Accepted candidate lemmas, one per line.
    #[arg(long)]
    accepted: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    log: Option<PathBuf>,
    /// Write the proposals with their accepted/rejected status here.
    #[arg(long)]
    decisions: Option<PathBuf>,
}

#[derive(Args)]
struct ArcArgs {
    #[command(flatten)]
    lex: LexArgs,
    /// One `.txt` or `.conllu` file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CHUNKS)]
    chunks: usize,
    #[arg(long)]
    window_tokens: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SMOOTHING)]
    smoothing_window: usize,
    /// CSV output; a JSON copy is written next to it with `--json`.
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    lex: LexArgs,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    emotion: Emotion,
    #[arg(long, default_value_t = 999)]
    permutations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PlotArgs {
    /// Arc JSON as written by `arc --json` or `run`.
    #[arg(long)]
    arc: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Comma-separated emotions to draw; all when omitted.
    #[arg(long)]
    emotions: Option<String>,
}

/// Every config key can be overridden by the flag of the same name.
#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, num_args = 1..)]
    corpus: Vec<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Comma-separated active emotions.
    #[arg(long)]
    emotions: Option<String>,
    /// `error` or `keep-max`
    #[arg(long)]
    dedupe: Option<String>,
    #[arg(long)]
    chunks: Option<usize>,
    #[arg(long)]
    window_tokens: Option<usize>,
    #[arg(long)]
    smoothing_window: Option<usize>,
    /// `words` or `tokens`
    #[arg(long)]
    denominator: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    svg: Option<bool>,
    #[arg(long)]
    plot_emotions: Option<String>,
    #[arg(long)]
    chapter_patterns: Option<PathBuf>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    expand: Option<bool>,
    #[arg(long)]
    expansion_threshold: Option<f64>,
    #[arg(long)]
    expansion_candidates: Option<usize>,
    #[arg(long)]
    embedding_dimension: Option<usize>,
    #[arg(long)]
    embedding_window: Option<usize>,
    #[arg(long)]
    embedding_negatives: Option<usize>,
    #[arg(long)]
    embedding_epochs: Option<usize>,
    #[arg(long)]
    embedding_min_count: Option<usize>,
    #[arg(long)]
    embedding_subsample_threshold: Option<f64>,
    #[arg(long)]
    embedding_learning_rate: Option<f64>,
    #[arg(long)]
    pretrained_vectors: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Command failure with the exit code it maps to.
struct Failure {
    status: ExitStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::EmptyDocument(_) | Error::EmptyVocab(_) => ExitStatus::EmptyCorpus,
            _ => ExitStatus::ConfigError,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            status: ExitStatus::ConfigError,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<ExitStatus, Failure>;

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        status: ExitStatus::ConfigError,
        message: message.into(),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| config_error(format!("{}: {e}", path.display())))
}

fn patterns(path: Option<&PathBuf>) -> Result<ChapterPatterns, Failure> {
    Ok(match path {
        Some(p) => ChapterPatterns::load(p)?,
        None => ChapterPatterns::default(),
    })
}

fn emotion_set(list: Option<&str>) -> Result<EmotionSet, Failure> {
    Ok(match list {
        Some(s) => EmotionSet::parse_list(s)?,
        None => EmotionSet::default(),
    })
}

fn load_lexicon(args: &LexArgs) -> Result<(Lexicon, emoarc::lexicon::LoadReport), Failure> {
    let opts = LoadOptions {
        emotions: emotion_set(args.emotions.as_deref())?,
        dedupe: if args.keep_max { Dedupe::KeepMax } else { Dedupe::Error },
    };
    let name = emoarc::ingest::document_id(&args.lexicon);
    Ok(Lexicon::load(name, open(&args.lexicon)?, &opts)?)
}

fn load_corpus_books(args: &CorpusArgs) -> Result<(Vec<CorpusBook>, ExitStatus), Failure> {
    if let Some(p) = args.corpus.iter().find(|p| !p.exists()) {
        return Err(config_error(format!("corpus path {} does not exist", p.display())));
    }
    let (books, skipped) = load_books(&args.corpus, &patterns(args.chapter_patterns.as_ref())?)?;
    for d in &skipped {
        eprintln!("skipped {}: {}", d.file, d.reason);
    }
    if books.is_empty() {
        return Err(Failure {
            status: ExitStatus::EmptyCorpus,
            message: "corpus contains no readable books".into(),
        });
    }
    let status = if skipped.is_empty() {
        ExitStatus::Success
    } else {
        ExitStatus::Partial
    };
    Ok((books, status))
}

fn load_one(path: &Path) -> Result<CorpusBook, Failure> {
    let args = CorpusArgs {
        corpus: vec![path.to_path_buf()],
        chapter_patterns: None,
    };
    let (mut books, _) = load_corpus_books(&args)?;
    Ok(books.remove(0))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(Error::from)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn ingest(args: IngestArgs) -> CmdResult {
    if !args.input.is_dir() {
        return Err(config_error(format!("{} is not a directory", args.input.display())));
    }
    let corpus = load_corpus(&args.input, &patterns(args.chapter_patterns.as_ref())?)?;
    for doc in &corpus.documents {
        write_atomic(&args.output.join(format!("{}.json", doc.id)), &json_bytes(doc)?)?;
        write_atomic(&args.output.join(format!("{}.txt", doc.id)), doc.body.as_bytes())?;
    }
    write_atomic(&args.output.join("ingest_report.json"), &json_bytes(&corpus.report)?)?;
    eprintln!(
        "retained {} of {} files",
        corpus.report.retained.len(),
        corpus.report.retained.len() + corpus.report.discarded.len()
    );
    Ok(if corpus.documents.is_empty() {
        ExitStatus::EmptyCorpus
    } else if corpus.report.discarded.is_empty() {
        ExitStatus::Success
    } else {
        ExitStatus::Partial
    })
}

fn stats(args: StatsArgs) -> CmdResult {
    let (books, status) = load_corpus_books(&args.corpus)?;
    let seqs: Vec<LemmaSequence> = books.into_iter().map(|b| b.lemmas).collect();
    print_json(&corpus_stats(&seqs, args.top))?;
    if let Some(path) = args.frequencies {
        let mut buf = Vec::new();
        write_frequency_tsv(&mut buf, &rank_frequencies(&lemma_frequencies(&seqs)))?;
        write_atomic(&path, &buf)?;
    }
    Ok(status)
}

fn split_spec<'a>(spec: &'a str, parts: usize, what: &str) -> Result<Vec<&'a str>, Failure> {
    let fields: Vec<&str> = spec.rsplitn(parts, ':').collect::<Vec<_>>().into_iter().rev().collect();
    if fields.len() != parts || fields.iter().any(|f| f.is_empty()) {
        return Err(config_error(format!("malformed {what} `{spec}`")));
    }
    Ok(fields)
}

fn lex(cmd: LexCommand) -> CmdResult {
    match cmd {
        LexCommand::Validate(args) => {
            let (lex, report) = load_lexicon(&args)?;
            print_json(&serde_json::json!({
                "lexicon": lex.name,
                "entries": lex.len(),
                "lemmas": lex.lemmas().count(),
                "report": report,
            }))?;
            Ok(ExitStatus::Success)
        }
        LexCommand::Stats(args) => {
            let (lex, _) = load_lexicon(&args)?;
            print_json(&lexicon_stats(&lex))?;
            Ok(ExitStatus::Success)
        }
        LexCommand::Edit(args) => {
            let (mut lex, _) = load_lexicon(&args.lex)?;
            let mut commands = Vec::new();
            for spec in &args.add {
                let f = split_spec(spec, 3, "--add")?;
                let intensity: f64 = f[2]
                    .parse()
                    .map_err(|_| config_error(format!("bad intensity in `{spec}`")))?;
                commands.push(EditCommand::Add {
                    lemma: f[0].to_string(),
                    emotion: f[1].parse()?,
                    intensity,
                });
            }
            for lemma in &args.remove {
                commands.push(EditCommand::RemoveLemma { lemma: lemma.clone() });
            }
            for spec in &args.copy {
                let f = split_spec(spec, 2, "--copy")?;
                commands.push(EditCommand::CopyEntries {
                    source: f[0].to_string(),
                    target: f[1].to_string(),
                    cosine: None,
                });
            }
            if let Some(path) = &args.commands {
                commands.extend(read_edit_log(open(path)?)?);
            }
            for c in commands {
                lex = lex.edit(c)?;
            }
            write_atomic(&args.output, lex.to_tsv_string().as_bytes())?;
            if let Some(path) = &args.log {
                let mut buf = Vec::new();
                lex.write_edit_log(&mut buf)?;
                write_atomic(path, &buf)?;
            }
            eprintln!("{} edits, {} entries", lex.edit_log().len(), lex.len());
            Ok(ExitStatus::Success)
        }
    }
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn embed(cmd: EmbedCommand) -> CmdResult {
    match cmd {
        EmbedCommand::Train(args) => {
            let defaults = EmbeddingConfig::default();
            let cfg = EmbeddingConfig {
                dimension: args.dimension.unwrap_or(defaults.dimension),
                window: args.window.unwrap_or(defaults.window),
                negatives: args.negatives.unwrap_or(defaults.negatives),
                epochs: args.epochs.unwrap_or(defaults.epochs),
                min_count: args.min_count.unwrap_or(defaults.min_count),
                seed: args.seed,
                ..defaults
            };
            cfg.validate()?;
            let (books, status) = load_corpus_books(&args.corpus)?;
            let seqs: Vec<LemmaSequence> = books.into_iter().map(|b| b.lemmas).collect();
            let model = train_sgns(&seqs, &cfg)?;
            let mut buf = Vec::new();
            model.write_text(&mut buf)?;
            write_atomic(&args.output, &buf)?;
            let meta = serde_json::json!({
                "tool": emoarc::config::TOOL_NAME,
                "version": emoarc::config::TOOL_VERSION,
                "embedding": &model.config,
                "corpus_fingerprint": &model.corpus_fingerprint,
                "vocab_size": model.len(),
            });
            write_atomic(&sidecar(&args.output), &json_bytes(&meta)?)?;
            eprintln!("{} words, dimension {}", model.len(), model.dimension());
            Ok(status)
        }
        EmbedCommand::Propose(args) => {
            let model = EmbeddingModel::read_text(open(&args.model)?)?;
            let (lex, _) = load_lexicon(&args.lex)?;
            let (books, status) = load_corpus_books(&args.corpus)?;
            let seqs: Vec<LemmaSequence> = books.into_iter().map(|b| b.lemmas).collect();
            let candidates: Vec<String> = corpus_stats(&seqs, args.candidates)
                .top_frequent
                .into_iter()
                .map(|(l, _)| l)
                .collect();
            let report = propose_expansions(&model, &lex, &candidates, args.threshold)?;
            let mut buf = Vec::new();
            write_proposals_jsonl(&mut buf, &report.proposals)?;
            write_atomic(&args.output, &buf)?;
            if let Some(path) = &args.near_misses {
                let mut buf = Vec::new();
                write_proposals_jsonl(&mut buf, &report.near_misses)?;
                write_atomic(path, &buf)?;
            }
            eprintln!(
                "{} proposals, {} near misses, {} already in lexicon, {} not in vocabulary",
                report.proposals.len(),
                report.near_misses.len(),
                report.already_in_lexicon.len(),
                report.not_in_vocab.len()
            );
            Ok(status)
        }
        EmbedCommand::Apply(args) => {
            let (lex, _) = load_lexicon(&args.lex)?;
            let proposals = read_proposals_jsonl(open(&args.proposals)?)?;
            let accepted = read_accepted(open(&args.accepted)?)?;
            let (out, decided) = apply_proposals(&lex, &proposals, &accepted)?;
            write_atomic(&args.output, out.to_tsv_string().as_bytes())?;
            if let Some(path) = &args.log {
                let mut buf = Vec::new();
                out.write_edit_log(&mut buf)?;
                write_atomic(path, &buf)?;
            }
            if let Some(path) = &args.decisions {
                let mut buf = Vec::new();
                write_proposals_jsonl(&mut buf, &decided)?;
                write_atomic(path, &buf)?;
            }
            Ok(ExitStatus::Success)
        }
    }
}

fn arc(args: ArcArgs) -> CmdResult {
    let (lex, _) = load_lexicon(&args.lex)?;
    let book = load_one(&args.input)?;
    let chunking = match args.window_tokens {
        Some(window_tokens) => Chunking::Window { window_tokens },
        None => Chunking::Count { n_chunks: args.chunks },
    };
    let scorer = Scorer::new(&lex);
    let mut arc = smooth_arc(&scorer.build_arc(&book.lemmas, chunking)?, args.smoothing_window)?;
    arc.title = Some(book.title().to_string());
    let config = RunConfig {
        corpus: vec![args.input.clone()],
        lexicon: Some(args.lex.lexicon.clone()),
        emotions: lex.emotions().clone(),
        chunks: args.chunks,
        window_tokens: args.window_tokens,
        smoothing_window: args.smoothing_window,
        output: args.output.clone(),
        ..Default::default()
    };
    let meta = RunMetadata::new(&config);
    let mut buf = Vec::new();
    write_arc_csv(&mut buf, &arc, &meta.comment_lines())?;
    write_atomic(&args.output, &buf)?;
    if args.json {
        write_atomic(&sidecar(&args.output), arc_json(&arc, &meta)?.as_bytes())?;
    }
    Ok(ExitStatus::Success)
}

fn compare(args: CompareArgs) -> CmdResult {
    let (lex, _) = load_lexicon(&args.lex)?;
    let a = load_one(&args.a)?;
    let b = load_one(&args.b)?;
    let result = permutation_test(&a.lemmas, &b.lemmas, &lex, args.emotion, args.permutations, args.seed)?;
    print_json(&result)?;
    Ok(ExitStatus::Success)
}

#[derive(Deserialize)]
struct ArcFile {
    arc: EmotionArc,
}

fn plot(args: PlotArgs) -> CmdResult {
    let text = std::fs::read_to_string(&args.arc).map_err(|e| config_error(format!("{}: {e}", args.arc.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    let file: ArcFile = serde_json::from_value(value.clone()).map_err(Error::from)?;
    let subset: Vec<Emotion> = match &args.emotions {
        Some(list) => EmotionSet::parse_list(list)?.iter().collect(),
        None => file.arc.emotions.iter().collect(),
    };
    let meta = value.get("metadata").map(|m| m.to_string());
    let svg = emit_arc_svg(&file.arc, &subset, meta.as_deref())?;
    write_atomic(&args.output, svg.as_bytes())?;
    Ok(ExitStatus::Success)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn run(args: RunArgs) -> CmdResult {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if !args.corpus.is_empty() {
        cfg.corpus = args.corpus;
    }
    if let Some(list) = args.emotions {
        cfg.emotions = EmotionSet::parse_list(&list)?;
    }
    if let Some(d) = args.dedupe {
        cfg.dedupe = match d.as_str() {
            "error" => Dedupe::Error,
            "keep-max" => Dedupe::KeepMax,
            other => return Err(config_error(format!("unknown dedupe mode `{other}`"))),
        };
    }
    if let Some(n) = args.chunks {
        cfg.chunks = n;
        cfg.window_tokens = None;
    }
    if let Some(d) = args.denominator {
        cfg.denominator = match d.as_str() {
            "words" => Denominator::Words,
            "tokens" => Denominator::Tokens,
            other => return Err(config_error(format!("unknown denominator `{other}`"))),
        };
    }
    if let Some(list) = args.plot_emotions {
        cfg.plot_emotions = EmotionSet::parse_list(&list)?.iter().collect();
    }
    set(&mut cfg.lexicon, args.lexicon.map(Some));
    set(&mut cfg.window_tokens, args.window_tokens.map(Some));
    set(&mut cfg.smoothing_window, args.smoothing_window);
    set(&mut cfg.svg, args.svg);
    set(&mut cfg.chapter_patterns, args.chapter_patterns.map(Some));
    set(&mut cfg.expand, args.expand);
    set(&mut cfg.expansion_threshold, args.expansion_threshold);
    set(&mut cfg.expansion_candidates, args.expansion_candidates);
    set(&mut cfg.embedding.dimension, args.embedding_dimension);
    set(&mut cfg.embedding.window, args.embedding_window);
    set(&mut cfg.embedding.negatives, args.embedding_negatives);
    set(&mut cfg.embedding.epochs, args.embedding_epochs);
    set(&mut cfg.embedding.min_count, args.embedding_min_count);
    set(&mut cfg.embedding.subsample_threshold, args.embedding_subsample_threshold);
    set(&mut cfg.embedding.learning_rate, args.embedding_learning_rate);
    set(&mut cfg.pretrained_vectors, args.pretrained_vectors.map(Some));
    set(&mut cfg.output, args.output);
    set(&mut cfg.seed, args.seed);
    let outcome = run_pipeline(&cfg);
    for d in &outcome.skipped {
        eprintln!("skipped {}: {}", d.file, d.reason);
    }
    if let Some(msg) = outcome.message {
        return Err(Failure {
            status: outcome.status,
            message: msg,
        });
    }
    eprintln!(
        "{} books scored, {} files written to {}",
        outcome.books,
        outcome.outputs.len(),
        cfg.output.display()
    );
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Stats(a) => stats(a),
        Command::Lex(c) => lex(c),
        Command::Embed(c) => embed(c),
        Command::Arc(a) => arc(a),
        Command::Compare(a) => compare(a),
        Command::Plot(a) => plot(a),
        Command::Run(a) => run(a),
    };
    let status = match result {
        Ok(s) => s,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.status
        }
    };
    // stdout may already be closed when piped into `head`
    let _ = io::stdout().flush();
    ExitCode::from(status.code() as u8)
}
