//! Checks against the published lexicon statistics and per-book scores.
//! These need assets that are not distributed with the crate:
//!
//! * `EMOARC_FEIL_LEXICON`: the final curated Finnish intensity lexicon (TSV).
//! * `EMOARC_TABLE3_CORPUS`: a directory with the four novels (Gutenberg
//!   `.txt`, optionally with lemmatized `.conllu` files of the same stem).
//!
//! Without them the tests print a note and pass.

use std::env;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use emoarc::arcs::{Denominator, Scorer};
use emoarc::ingest::ChapterPatterns;
use emoarc::lexicon::{lexicon_stats, Dedupe, LoadOptions};
use emoarc::pipeline::load_books;
use emoarc::{Emotion, Lexicon};

fn asset(var: &str) -> Option<PathBuf> {
    match env::var_os(var) {
        Some(p) => Some(PathBuf::from(p)),
        None => {
            eprintln!("{var} not set; skipping");
            None
        }
    }
}

fn feil() -> Option<Lexicon> {
    let path = asset("EMOARC_FEIL_LEXICON")?;
    let opts = LoadOptions {
        dedupe: Dedupe::KeepMax,
        ..Default::default()
    };
    let file = BufReader::new(File::open(&path).unwrap());
    Some(Lexicon::load("feil", file, &opts).unwrap().0)
}

#[test]
fn lexicon_distribution_matches_published_counts() {
    let Some(lex) = feil() else { return };
    let stats = lexicon_stats(&lex);
    assert_eq!(stats.count(Emotion::Sadness), Some(207));
    assert_eq!(stats.count(Emotion::Anticipation), Some(832));
    assert_eq!(stats.count(Emotion::Disgust), Some(951));
    for e in [Emotion::Fear, Emotion::Trust, Emotion::Joy, Emotion::Anger] {
        let n = stats.count(e).unwrap();
        assert!((1176..=1560).contains(&n), "{e}: {n}");
    }
    let co = stats.co(Emotion::Sadness, Emotion::Fear).unwrap();
    assert!((co - 0.71).abs() < 0.005, "co-annotation(sadness, fear) = {co}");
}

/// Word count and the seven per-10k scores, in table order.
const TABLE: &[(&str, usize, [f64; 7])] = &[
    ("Kauppa-Lopo", 12068, [65.96, 142.60, 47.76, 80.13, 132.20, 26.94, 158.82]),
    ("Rautatie", 28097, [40.81, 135.38, 26.68, 54.73, 91.72, 8.60, 133.82]),
    ("Hurskas Kurjuus", 52382, [88.64, 206.80, 71.10, 131.83, 164.37, 53.04, 189.12]),
    ("Arkielämä", 27292, [66.64, 156.76, 48.75, 93.35, 193.47, 30.86, 221.41]),
];

/// Scores depend on the lemmatizer and on the exact edition of each text, so
/// this compares with a relative tolerance and reports every deviation.
#[test]
fn per_book_scores_match_published_table() {
    let Some(lex) = feil() else { return };
    let Some(dir) = asset("EMOARC_TABLE3_CORPUS") else { return };
    let (books, skipped) = load_books(&[dir], &ChapterPatterns::default()).unwrap();
    assert!(skipped.is_empty(), "{skipped:?}");
    let scorer = Scorer::new(&lex);
    let mut failures = Vec::new();
    for (title, words, expected) in TABLE {
        let book = books
            .iter()
            .find(|b| b.title().to_lowercase().starts_with(&title.to_lowercase()))
            .unwrap_or_else(|| panic!("no book titled {title}"));
        let score = scorer.score_document(&book.lemmas, Denominator::Words).unwrap();
        let wc_dev = (score.word_count as f64 - *words as f64).abs() / *words as f64;
        eprintln!("{title}: word count {} (published {words})", score.word_count);
        if wc_dev > 0.02 {
            failures.push(format!("{title} word count {} vs {words}", score.word_count));
        }
        for (i, (got, want)) in score.normalized.values.iter().zip(expected).enumerate() {
            let dev = (got - want).abs() / want;
            eprintln!("  {}: {got:.2} (published {want:.2})", lex.emotions().as_slice()[i]);
            if dev > 0.05 {
                failures.push(format!("{title} {}: {got:.2} vs {want:.2}", lex.emotions().as_slice()[i]));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
