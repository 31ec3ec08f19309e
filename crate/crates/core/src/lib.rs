//! Lexicon-based emotion analysis for literary corpora.
//!
//! The crate turns Project Gutenberg plain text (or CoNLL-U parser output)
//! into per-book emotion totals normalized per 10,000 words and chunked,
//! smoothed emotion arcs. It also trains skip-gram word vectors to propose
//! lexicon additions for frequent words the lexicon misses, and tests score
//! differences between books with a seeded permutation test.
//!
//! ```
//! use emoarc::{arcs, lexicon::{Lexicon, LoadOptions}, textproc::LemmaSequence};
//!
//! let (lex, _) = Lexicon::load("toy", "ilo\tjoy\t0.8\n".as_bytes(), &LoadOptions::default())?;
//! let seq = LemmaSequence::from_text("doc", "ilo a b c d ilo e f g h");
//! let score = arcs::score_document(&seq, &lex)?;
//! assert_eq!(score.normalized.values[4], 1600.0); // joy per 10k words
//! # Ok::<(), emoarc::Error>(())
//! ```

pub mod arcs;
pub mod config;
pub mod embeddings;
pub mod emotion;
pub mod error;
pub mod exact;
pub mod ingest;
pub mod lexicon;
pub mod pipeline;
pub mod plot;
pub mod stats;
pub mod textproc;

pub use arcs::{build_arc, score_document, smooth_arc, Chunking, EmotionArc, EmotionVector};
pub use emotion::{Emotion, EmotionSet};
pub use error::{Error, Result};
pub use lexicon::Lexicon;
pub use textproc::{LemmaSequence, Token};
