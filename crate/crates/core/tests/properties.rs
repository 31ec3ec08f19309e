use std::collections::{BTreeMap, BTreeSet};

use emoarc::arcs::{smooth_series, write_arc_csv, Denominator, Scorer};
use emoarc::embeddings::{cosine, propose_expansions, EmbeddingModel};
use emoarc::lexicon::{lexicon_stats, EditCommand, LoadOptions};
use emoarc::plot::emit_arc_svg;
use emoarc::stats::permutation_test;
use emoarc::textproc::{corpus_stats, read_conllu, tokenize};
use emoarc::{build_arc, score_document, smooth_arc, Chunking, Emotion, EmotionSet, Lexicon, LemmaSequence};
use proptest::prelude::*;

const VOCAB: usize = 20;

fn lemma(i: usize) -> String {
    format!("w{i}")
}

fn lexicon_tsv(rows: &BTreeMap<(usize, usize), u32>) -> String {
    let emotions = EmotionSet::default();
    rows.iter()
        .map(|(&(l, e), &v)| format!("{}\t{}\t{}\n", lemma(l), emotions.as_slice()[e], v as f64 / 1000.0))
        .collect()
}

fn lexicon_rows() -> impl Strategy<Value = BTreeMap<(usize, usize), u32>> {
    prop::collection::btree_map((0..VOCAB, 0usize..7), 0u32..=1000, 0..20)
}

fn load(tsv: &str) -> Lexicon {
    Lexicon::load("p", tsv.as_bytes(), &LoadOptions::default()).unwrap().0
}

fn document() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![
            6 => (0..VOCAB + 5).prop_map(|i| lemma(i)),
            1 => Just(".".to_string()),
            1 => Just(",".to_string()),
        ],
        1..80,
    )
    .prop_map(|t| format!("w0 {}", t.join(" ")))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tokenizer_lemmas_are_lowercased_surfaces(text in "[A-Za-zÄÖäö0-9 ,.!?'-]{0,80}") {
        let seq = LemmaSequence::from_text("t", &text);
        for t in &seq.tokens {
            prop_assert!(!t.lemma.is_empty());
            prop_assert_eq!(&t.lemma, &t.surface.to_lowercase());
            if !t.is_word {
                prop_assert!(t.upos.is_none());
            }
        }
        prop_assert_eq!(seq.tokens.clone(), tokenize(&text));
        let b = &seq.sentence_boundaries;
        prop_assert!(b.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(b.iter().all(|&x| x >= 1 && x <= seq.tokens.len()));
        if !seq.tokens.is_empty() {
            prop_assert_eq!(b.last().copied(), Some(seq.tokens.len()));
        }
    }

    #[test]
    fn conllu_token_count_matches_rows(sentences in prop::collection::vec(prop::collection::vec(0..VOCAB, 1..8), 1..6)) {
        let mut text = String::new();
        let mut rows = 0;
        for (s, words) in sentences.iter().enumerate() {
            text.push_str(&format!("# sent_id = {s}\n"));
            if words.len() >= 2 {
                text.push_str("1-2\tkaksi\t_\t_\t_\t_\t_\t_\t_\t_\n");
            }
            for (i, w) in words.iter().enumerate() {
                text.push_str(&format!("{}\tW{w}\t{}\tNOUN\t_\t_\t0\troot\t_\t_\n", i + 1, lemma(*w)));
                rows += 1;
                if i == 0 {
                    text.push_str("1.1\tellipsis\t_\t_\t_\t_\t_\t_\t_\t_\n");
                }
            }
            text.push('\n');
        }
        let seq = read_conllu("c", text.as_bytes()).unwrap();
        prop_assert_eq!(seq.tokens.len(), rows);
        prop_assert_eq!(seq.sentence_count(), sentences.len());
        prop_assert!(seq.tokens.iter().all(|t| t.lemma.starts_with('w')));
    }

    #[test]
    fn corpus_stats_ignore_document_order(docs in prop::collection::vec(document(), 1..6), k in 0usize..10) {
        let seqs: Vec<LemmaSequence> = docs.iter().enumerate().map(|(i, d)| LemmaSequence::from_text(i.to_string(), d)).collect();
        let mut reversed = seqs.clone();
        reversed.reverse();
        let a = corpus_stats(&seqs, k);
        prop_assert_eq!(&a, &corpus_stats(&reversed, k));
        prop_assert!(a.top_frequent.len() <= k);
        prop_assert!(a.top_frequent.windows(2).all(|w| w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0)));
        if a.word_count > 0 {
            prop_assert_eq!(a.ttr, a.type_count as f64 / a.word_count as f64);
        }
    }

    #[test]
    fn lexicon_tsv_round_trip(rows in lexicon_rows()) {
        let lex = load(&lexicon_tsv(&rows));
        let again = load(&lex.to_tsv_string());
        prop_assert!(lex.same_entries(&again));
        prop_assert_eq!(lex.to_tsv_string(), again.to_tsv_string());
    }

    #[test]
    fn edits_replay_and_leave_input_untouched(rows in lexicon_rows(), ops in prop::collection::vec((0usize..3, 0..VOCAB, 0..VOCAB, 0usize..7, 0u32..=1000), 0..12)) {
        let original = load(&lexicon_tsv(&rows));
        let snapshot = original.clone();
        let mut current = original.clone();
        for (kind, a, b, e, v) in ops {
            let cmd = match kind {
                0 => EditCommand::Add { lemma: lemma(a), emotion: EmotionSet::default().as_slice()[e], intensity: v as f64 / 1000.0 },
                1 => EditCommand::RemoveLemma { lemma: lemma(a) },
                _ => EditCommand::CopyEntries { source: lemma(a), target: lemma(b), cosine: None },
            };
            if let Ok(next) = current.edit(cmd) {
                current = next;
            }
        }
        prop_assert_eq!(&original, &snapshot);
        let replayed = original.replay(current.edit_log()).unwrap();
        prop_assert!(replayed.same_entries(&current));
    }

    #[test]
    fn adding_an_entry_is_monotone(rows in lexicon_rows(), doc in document(), l in 0..VOCAB, e in 0usize..7, v in 0u32..=1000) {
        let lex = load(&lexicon_tsv(&rows));
        let emotion = EmotionSet::default().as_slice()[e];
        prop_assume!(lex.intensity(&lemma(l), emotion).is_none());
        let bigger = lex.edit(EditCommand::Add { lemma: lemma(l), emotion, intensity: v as f64 / 1000.0 }).unwrap();
        let seq = LemmaSequence::from_text("d", &doc);
        let before = score_document(&seq, &lex).unwrap();
        let after = score_document(&seq, &bigger).unwrap();
        for i in 0..7 {
            if i == e {
                prop_assert!(after.raw.values[i] >= before.raw.values[i]);
            } else {
                prop_assert_eq!(after.raw.values[i], before.raw.values[i]);
            }
        }
    }

    #[test]
    fn doubling_a_document_keeps_normalized_scores(rows in lexicon_rows(), doc in document()) {
        let lex = load(&lexicon_tsv(&rows));
        let once = score_document(&LemmaSequence::from_text("d", &doc), &lex).unwrap();
        let twice = score_document(&LemmaSequence::from_text("d", &format!("{doc} {doc}")), &lex).unwrap();
        for (a, b) in once.normalized.values.iter().zip(&twice.normalized.values) {
            prop_assert!(rel_close(*a, *b, 1e-9), "{a} vs {b}");
        }
    }

    #[test]
    fn arc_shapes_and_smoothing_bounds(rows in lexicon_rows(), doc in document(), n in 1usize..12, half in 0usize..4) {
        let lex = load(&lexicon_tsv(&rows));
        let seq = LemmaSequence::from_text("d", &doc);
        prop_assume!(seq.word_count() >= n);
        let window = 2 * half + 1;
        let arc = smooth_arc(&build_arc(&seq, &lex, Chunking::Count { n_chunks: n }).unwrap(), window).unwrap();
        prop_assert_eq!(arc.len(), n);
        prop_assert_eq!(arc.chunk_token_counts.len(), n);
        prop_assert_eq!(arc.smoothed.as_ref().unwrap().len(), n);
        prop_assert_eq!(arc.chunk_token_counts.iter().sum::<usize>(), seq.word_count());
        let (lo, hi) = (arc.chunk_token_counts.iter().min().unwrap(), arc.chunk_token_counts.iter().max().unwrap());
        prop_assert!(hi - lo <= 1);
        for e in arc.emotions.iter() {
            let raw = arc.series(e).unwrap();
            let sm = arc.smoothed_series(e).unwrap();
            for i in 0..n {
                let w = &raw[i.saturating_sub(half)..(i + half + 1).min(n)];
                let min = w.iter().copied().fold(f64::INFINITY, f64::min);
                let max = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(sm[i] >= min && sm[i] <= max, "{} not in [{min}, {max}]", sm[i]);
                prop_assert!(raw[i] >= 0.0);
            }
        }
    }

    #[test]
    fn window_chunking_covers_every_word(doc in document(), w in 1usize..30) {
        let lex = load("w1\tjoy\t0.5\n");
        let seq = LemmaSequence::from_text("d", &doc);
        let arc = build_arc(&seq, &lex, Chunking::Window { window_tokens: w }).unwrap();
        prop_assert_eq!(arc.chunk_token_counts.iter().sum::<usize>(), seq.word_count());
        prop_assert!(arc.chunk_token_counts[..arc.len() - 1].iter().all(|&c| c == w));
        prop_assert!(*arc.chunk_token_counts.last().unwrap() <= w);
    }

    #[test]
    fn csv_round_trips_to_two_decimals(rows in lexicon_rows(), doc in document(), n in 1usize..8) {
        let lex = load(&lexicon_tsv(&rows));
        let seq = LemmaSequence::from_text("d", &doc);
        prop_assume!(seq.word_count() >= n);
        let arc = smooth_arc(&build_arc(&seq, &lex, Chunking::Count { n_chunks: n }).unwrap(), 3).unwrap();
        let mut buf = Vec::new();
        write_arc_csv(&mut buf, &arc, &["note".to_string()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines().filter(|l| !l.starts_with('#'));
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        prop_assert_eq!(header.len(), 1 + 2 * 7);
        let mut count = 0;
        for (i, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').collect();
            prop_assert_eq!(cells[0].parse::<usize>().unwrap(), i);
            for (j, e) in arc.emotions.iter().enumerate() {
                let raw: f64 = cells[1 + j].parse().unwrap();
                let sm: f64 = cells[8 + j].parse().unwrap();
                prop_assert!((raw - arc.series(e).unwrap()[i]).abs() <= 0.005 + 1e-9);
                prop_assert!((sm - arc.smoothed_series(e).unwrap()[i]).abs() <= 0.005 + 1e-9);
            }
            count += 1;
        }
        prop_assert_eq!(count, n);
    }

    #[test]
    fn cosine_symmetry_bounds_and_scale(u in prop::collection::vec(-10.0f32..10.0, 1..16), alpha in 0.01f32..100.0, seed in any::<u64>()) {
        let v: Vec<f32> = u.iter().enumerate().map(|(i, x)| x * 0.5 + ((seed >> (i % 60)) & 7) as f32 - 3.0).collect();
        prop_assume!(u.iter().any(|x| *x != 0.0) && v.iter().any(|x| *x != 0.0));
        let c = cosine(&u, &v).unwrap();
        prop_assert_eq!(c, cosine(&v, &u).unwrap());
        prop_assert!((-1.0..=1.0).contains(&c));
        let scaled: Vec<f32> = u.iter().map(|x| x * alpha).collect();
        prop_assert!((cosine(&scaled, &v).unwrap() - c).abs() < 1e-5);
    }

    #[test]
    fn proposals_respect_lexicon_and_threshold(vectors in prop::collection::vec(prop::collection::vec(-1.0f32..1.0, 4), 2..12), in_lex in prop::collection::vec(any::<bool>(), 12), threshold in 0.05f64..1.0) {
        let words: Vec<String> = (0..vectors.len()).map(lemma).collect();
        let flat: Vec<f32> = vectors.iter().flatten().map(|x| x + 1.5).collect();
        let model = EmbeddingModel::from_parts(words.clone(), flat, 4).unwrap();
        let tsv: String = words.iter().zip(&in_lex).filter(|(_, &b)| b).map(|(w, _)| format!("{w}\tjoy\t0.5\n")).collect();
        let lex = load(&tsv);
        let report = propose_expansions(&model, &lex, &words, threshold).unwrap();
        for p in &report.proposals {
            prop_assert!(!lex.contains_lemma(&p.candidate));
            prop_assert!(p.cosine >= threshold);
            prop_assert_eq!(&p.proposed_entries, &lex.lemma_entries(&p.source).collect::<Vec<_>>());
        }
        for p in &report.near_misses {
            prop_assert!(p.cosine < threshold);
        }
        let again = propose_expansions(&model, &lex, &words, threshold).unwrap();
        prop_assert_eq!(report, again);
    }

    #[test]
    fn single_permutation_gives_half_or_one(seed in any::<u64>(), a in document(), b in document()) {
        let lex = load("w1\tjoy\t0.7\nw2\tjoy\t0.2\n");
        let (a, b) = (LemmaSequence::from_text("a", &a), LemmaSequence::from_text("b", &b));
        let r = permutation_test(&a, &b, &lex, Emotion::Joy, 1, seed).unwrap();
        prop_assert!(r.p_value == 0.5 || r.p_value == 1.0);
        let again = permutation_test(&a, &b, &lex, Emotion::Joy, 1, seed).unwrap();
        prop_assert_eq!(r, again);
    }
}

#[test]
fn directional_co_annotation_matches_hand_counts() {
    // sadness: a b c d; fear: a b; joy: d e
    let lex = load(
        "a\tsadness\t0.5\nb\tsadness\t0.5\nc\tsadness\t0.5\nd\tsadness\t0.5\n\
         a\tfear\t0.5\nb\tfear\t0.5\nd\tjoy\t0.5\ne\tjoy\t0.5\n",
    );
    let s = lexicon_stats(&lex);
    assert_eq!(s.count(Emotion::Sadness), Some(4));
    assert_eq!(s.co(Emotion::Sadness, Emotion::Fear), Some(0.5));
    assert_eq!(s.co(Emotion::Fear, Emotion::Sadness), Some(1.0));
    assert_eq!(s.co(Emotion::Joy, Emotion::Sadness), Some(0.5));
    assert_eq!(s.co(Emotion::Sadness, Emotion::Joy), Some(0.25));
    assert_eq!(s.co(Emotion::Trust, Emotion::Joy), None);
}

#[test]
fn every_sadness_lemma_also_fear() {
    let lex = load("a\tsadness\t0.5\nb\tsadness\t0.5\na\tfear\t0.1\nb\tfear\t0.9\nc\tfear\t0.2\n");
    assert_eq!(lexicon_stats(&lex).co(Emotion::Sadness, Emotion::Fear), Some(1.0));
}

#[test]
fn svg_single_emotion_ten_chunks() {
    let lex = load("w1\tjoy\t0.5\nw2\tfear\t0.5\n");
    let text: Vec<String> = (0..40).map(|i| lemma(i % 4)).collect();
    let seq = LemmaSequence::from_text("d", &text.join(" "));
    let arc = build_arc(&seq, &lex, Chunking::Count { n_chunks: 10 }).unwrap();
    let svg = emit_arc_svg(&arc, &[Emotion::Joy], None).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let lines: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("polyline")).collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0].attribute("data-emotion"), Some("joy"));
    let points: Vec<&str> = lines[0].attribute("points").unwrap().split_whitespace().collect();
    assert_eq!(points.len(), 10);
    let ys: BTreeSet<&str> = points.iter().map(|p| p.split(',').nth(1).unwrap()).collect();
    assert_eq!(ys.len(), 1, "constant arc must draw a horizontal line");

    assert!(emit_arc_svg(&arc, &[], None).is_err());
    let only_joy = Lexicon::load("j", "w1\tjoy\t0.5\n".as_bytes(), &LoadOptions { emotions: EmotionSet::parse_list("joy").unwrap(), ..Default::default() }).unwrap().0;
    let narrow = build_arc(&seq, &only_joy, Chunking::Count { n_chunks: 10 }).unwrap();
    assert!(emit_arc_svg(&narrow, &[Emotion::Fear], None).is_err());
}

#[test]
fn token_denominator_counts_punctuation() {
    let lex = load("ilo\tjoy\t1\n");
    let seq = LemmaSequence::from_text("d", "ilo , ilo .");
    let scorer = Scorer::new(&lex);
    let words = scorer.score_document(&seq, Denominator::Words).unwrap();
    let tokens = scorer.score_document(&seq, Denominator::Tokens).unwrap();
    assert_eq!(words.normalized.values[4], 10000.0);
    assert_eq!(tokens.normalized.values[4], 5000.0);
    assert_eq!(words.raw, tokens.raw);
}

#[test]
fn even_smoothing_window_is_rejected() {
    assert!(matches!(smooth_series(&[1.0, 2.0], 2), Err(emoarc::Error::Config(_))));
    assert!(matches!(smooth_series(&[1.0, 2.0], 0), Err(emoarc::Error::Config(_))));
}
