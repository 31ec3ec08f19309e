mod common;

use std::fs;

use emoarc::ingest::{
    chapterize, ingest_book, load_corpus, strip_gutenberg, ChapterPatterns, RawBook,
};
use emoarc::Error;
use proptest::prelude::*;

use common::golden::GOLDEN;
use common::{fixture, write_synthetic_corpus};


fn ingest(file: &str) -> emoarc::Result<(emoarc::ingest::Document, bool)> {
    let raw = RawBook::read(fixture(&format!("ingest/{file}")))?;
    ingest_book(&raw, &ChapterPatterns::default())
}

#[test]
fn golden_fixtures() {
    for g in GOLDEN {
        let (doc, markers) = ingest(g.file).unwrap_or_else(|e| panic!("{}: {e}", g.file));
        assert_eq!(doc.metadata, g.metadata(), "{}", g.file);
        assert_eq!(doc.body, g.body, "{}", g.file);
        assert_eq!(doc.chapters.len(), g.chapters, "{}", g.file);
        assert_eq!(doc.chapters.concat(), doc.body, "{}", g.file);
        assert_eq!(markers, g.markers, "{}", g.file);
        assert_eq!(doc.id, g.file.trim_end_matches(".txt"));
    }
}

#[test]
fn chapter_headings_open_their_chapters() {
    let (doc, _) = ingest("the_markers.txt").unwrap();
    assert_eq!(doc.chapters[0], "\nI.\n\nMatti ja Liisa asuivat metsässä.\n\n");
    assert_eq!(doc.chapters[1], "II.\n\nHe näkivät junan.\n");

    let (doc, _) = ingest("front_matter_year.txt").unwrap();
    assert!(doc.chapters[0].contains("Werner Söderström"));
    assert!(doc.chapters[1].starts_with("ENSIMMÄINEN LUKU."));
    assert!(doc.chapters[2].starts_with("TOINEN LUKU."));
}

#[test]
fn end_marker_before_start_marker_is_an_error() {
    match ingest("end_before_start.txt") {
        Err(Error::MarkerOrder { start_line, end_line }) => {
            assert_eq!((start_line, end_line), (5, 3));
        }
        other => panic!("expected MarkerOrder, got {other:?}"),
    }
}

#[test]
fn seven_luku_chapters_round_trip() {
    let (doc, _) = ingest("seven_luku.txt").unwrap();
    assert_eq!(doc.chapters.len(), 7);
    for (n, chapter) in doc.chapters.iter().enumerate() {
        assert!(chapter.starts_with(&format!("LUKU {}\n", n + 1)), "{chapter:?}");
        assert!(chapter.contains(&format!("Luvun {} teksti", n + 1)));
    }
    assert_eq!(doc.chapters.concat(), doc.body);
}

#[test]
fn custom_chapter_patterns_replace_defaults() {
    let (doc, _) = ingest("seven_luku.txt").unwrap();
    let only_five = ChapterPatterns::parse("# just one\n^LUKU 5$\n").unwrap();
    let chapters = chapterize(&doc.body, &only_five);
    assert_eq!(chapters.len(), 2);
    assert!(chapters[1].starts_with("LUKU 5\n"));
    assert!(matches!(ChapterPatterns::parse("(unclosed"), Err(Error::Parse { line: 1, .. })));
}

#[test]
fn invalid_utf8_is_discarded() {
    let dir = tempfile::tempdir().unwrap();
    write_synthetic_corpus(dir.path(), 3, &[1]);
    let corpus = load_corpus(dir.path(), &ChapterPatterns::default()).unwrap();
    assert_eq!(corpus.documents.len(), 2);
    assert_eq!(corpus.report.discarded.len(), 1);
    assert_eq!(corpus.report.discarded[0].file, "book0001.txt");
    assert!(corpus.report.discarded[0].reason.contains("UTF-8"));
}

#[test]
fn three_valid_files() {
    let dir = tempfile::tempdir().unwrap();
    write_synthetic_corpus(dir.path(), 3, &[]);
    let corpus = load_corpus(dir.path(), &ChapterPatterns::default()).unwrap();
    assert_eq!(corpus.documents.len(), 3);
    assert!(corpus.report.discarded.is_empty());
    assert!(corpus.report.warnings.is_empty());
}

#[test]
fn empty_directory_warns() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = load_corpus(dir.path(), &ChapterPatterns::default()).unwrap();
    assert!(corpus.documents.is_empty());
    assert_eq!(corpus.report.warnings.len(), 1);
}

#[test]
fn corpus_of_1000_with_25_undecodable() {
    let dir = tempfile::tempdir().unwrap();
    let invalid: Vec<usize> = (0..25).map(|k| k * 40 + 3).collect();
    let names = write_synthetic_corpus(dir.path(), 1000, &invalid);
    let corpus = load_corpus(dir.path(), &ChapterPatterns::default()).unwrap();
    assert_eq!(corpus.documents.len(), 975);
    assert_eq!(corpus.report.retained.len(), 975);
    let discarded: Vec<&str> = corpus.report.discarded.iter().map(|d| d.file.as_str()).collect();
    let expected: Vec<&str> = invalid.iter().map(|&i| names[i].as_str()).collect();
    assert_eq!(discarded, expected);
}

#[test]
fn loading_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write_synthetic_corpus(dir.path(), 60, &[7, 31]);
    let a = load_corpus(dir.path(), &ChapterPatterns::default()).unwrap();
    let b = load_corpus(dir.path(), &ChapterPatterns::default()).unwrap();
    assert_eq!(a.documents, b.documents);
    assert_eq!(
        serde_json::to_string(&a.report).unwrap(),
        serde_json::to_string(&b.report).unwrap()
    );
    let ids: Vec<&str> = a.documents.iter().map(|d| d.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

fn body_line() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => "[a-zäö ]{0,30}[.!?]?",
        1 => Just("LUKU 3".to_string()),
        1 => Just("IV.".to_string()),
        1 => Just("12.".to_string()),
        1 => Just(String::new()),
    ]
}

fn gutenberg_text() -> impl Strategy<Value = (String, String)> {
    (
        prop::collection::vec(body_line(), 0..30),
        0usize..4,
        any::<bool>(),
    )
        .prop_map(|(lines, variant, crlf)| {
            let nl = if crlf { "\r\n" } else { "\n" };
            let body: String = lines.iter().map(|l| format!("{l}{nl}")).collect();
            let (start, end) = [
                ("*** START OF THE PROJECT GUTENBERG EBOOK X ***", "*** END OF THE PROJECT GUTENBERG EBOOK X ***"),
                ("*** START OF THIS PROJECT GUTENBERG EBOOK X ***", "*** END OF THIS PROJECT GUTENBERG EBOOK X ***"),
                ("***START OF THE PROJECT GUTENBERG E-BOOK X***", "End of the Project Gutenberg EBook of X"),
                ("*** start of the project gutenberg ebook x ***", "End of Project Gutenberg's X, by Y"),
            ][variant];
            let text = format!("Title: X{nl}{nl}{start}{nl}{body}{end}{nl}licence{nl}");
            (text, body)
        })
}

proptest! {
    #[test]
    fn stripping_recovers_body_and_is_idempotent((text, body) in gutenberg_text()) {
        let once = strip_gutenberg(&text).unwrap();
        prop_assert_eq!(once.body, body.as_str());
        let twice = strip_gutenberg(once.body).unwrap();
        prop_assert_eq!(twice.body, once.body);
    }

    #[test]
    fn chapters_concatenate_to_body(lines in prop::collection::vec(body_line(), 0..40)) {
        let body: String = lines.iter().map(|l| format!("{l}\n")).collect();
        let chapters = chapterize(&body, &ChapterPatterns::default());
        prop_assert!(!chapters.is_empty());
        prop_assert_eq!(chapters.concat(), body);
    }

    #[test]
    fn ingest_of_file_matches_in_memory_strip((text, body) in gutenberg_text()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.txt");
        fs::write(&path, &text).unwrap();
        let (doc, markers) = ingest_book(&RawBook::read(&path).unwrap(), &ChapterPatterns::default()).unwrap();
        prop_assert!(markers);
        prop_assert_eq!(doc.body, body);
        prop_assert_eq!(doc.metadata.title.as_deref(), Some("X"));
    }
}
