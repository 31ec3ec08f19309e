//! Emotion scoring of lemma sequences: whole-book totals normalized per
//! 10,000 words, and chunked emotion arcs with centered moving-average
//! smoothing.
//!
//! Raw intensity sums are accumulated exactly ([`ExactSum`]), so the sum of
//! per-chunk totals equals the whole-document total bit for bit.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::emotion::{Emotion, EmotionSet};
use crate::error::{Error, Result};
use crate::exact::ExactSum;
use crate::lexicon::Lexicon;
use crate::textproc::{LemmaSequence, Token};

/// Words per normalization unit.
pub const PER_WORDS: f64 = 10_000.0;

pub const DEFAULT_CHUNKS: usize = 100;
pub const DEFAULT_SMOOTHING: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    /// Sum of intensities.
    Raw,
    /// Sum of intensities per 10,000 words.
    Per10k,
}

/// One value per emotion of the active set, in set order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionVector {
    pub scale: Scale,
    pub values: Vec<f64>,
}

impl EmotionVector {
    pub fn zeros(scale: Scale, n: usize) -> Self {
        EmotionVector {
            scale,
            values: vec![0.0; n],
        }
    }

    pub fn get(&self, set: &EmotionSet, e: Emotion) -> Option<f64> {
        set.index_of(e).map(|i| self.values[i])
    }
}

/// Exact per-emotion intensity sums.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EmotionTotals(pub Vec<ExactSum>);

impl EmotionTotals {
    pub fn new(n: usize) -> Self {
        EmotionTotals(vec![ExactSum::new(); n])
    }

    pub fn merge(&mut self, other: &EmotionTotals) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.merge(b);
        }
    }

    pub fn raw(&self) -> EmotionVector {
        EmotionVector {
            scale: Scale::Raw,
            values: self.0.iter().map(ExactSum::value).collect(),
        }
    }

    /// `10000 * sum / denominator`
    pub fn per_10k(&self, denominator: usize) -> EmotionVector {
        EmotionVector {
            scale: Scale::Per10k,
            values: self
                .0
                .iter()
                .map(|s| PER_WORDS * s.value() / denominator as f64)
                .collect(),
        }
    }
}

/// Normalization denominator for whole-book scores.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Denominator {
    /// Word tokens only (tokens with alphabetic content).
    #[default]
    Words,
    /// All tokens including punctuation.
    Tokens,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentScore {
    pub doc_id: String,
    pub emotions: EmotionSet,
    pub word_count: usize,
    pub token_count: usize,
    pub denominator: Denominator,
    pub raw: EmotionVector,
    pub normalized: EmotionVector,
    #[serde(skip)]
    pub totals: EmotionTotals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum Chunking {
    /// Equal word-count spans whose sizes differ by at most one.
    Count { n_chunks: usize },
    /// Fixed spans of `window_tokens` words; the last may be shorter.
    Window { window_tokens: usize },
}

impl Default for Chunking {
    fn default() -> Self {
        Chunking::Count {
            n_chunks: DEFAULT_CHUNKS,
        }
    }
}

impl Chunking {
    /// Chunk sizes for a stream of `words` word tokens.
    pub fn sizes(self, words: usize) -> Result<Vec<usize>> {
        match self {
            Chunking::Count { n_chunks: 0 } | Chunking::Window { window_tokens: 0 } => {
                Err(Error::Config("chunking parameter must be at least 1".into()))
            }
            Chunking::Count { n_chunks } => {
                if words < n_chunks {
                    return Err(Error::Chunking {
                        words,
                        chunks: n_chunks,
                    });
                }
                let base = words / n_chunks;
                let extra = words % n_chunks;
                Ok((0..n_chunks).map(|i| base + usize::from(i < extra)).collect())
            }
            Chunking::Window { window_tokens } => {
                if words == 0 {
                    return Err(Error::Chunking { words, chunks: 1 });
                }
                let mut sizes = vec![window_tokens; words / window_tokens];
                if words % window_tokens != 0 {
                    sizes.push(words % window_tokens);
                }
                Ok(sizes)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionArc {
    pub doc_id: String,
    #[serde(default)]
    pub title: Option<String>,
    pub emotions: EmotionSet,
    pub chunking: Chunking,
    /// Word tokens per chunk.
    pub chunk_token_counts: Vec<usize>,
    /// Un-normalized intensity sums per chunk.
    pub chunk_sums: Vec<EmotionVector>,
    /// Per-10k scores within each chunk, unsmoothed.
    pub raw: Vec<EmotionVector>,
    #[serde(default)]
    pub smoothed: Option<Vec<EmotionVector>>,
    #[serde(default)]
    pub smoothing_window: Option<usize>,
    #[serde(skip)]
    pub chunk_totals: Vec<EmotionTotals>,
}

impl EmotionArc {
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// The raw per-10k series of one emotion.
    pub fn series(&self, e: Emotion) -> Option<Vec<f64>> {
        let i = self.emotions.index_of(e)?;
        Some(self.raw.iter().map(|v| v.values[i]).collect())
    }

    pub fn smoothed_series(&self, e: Emotion) -> Option<Vec<f64>> {
        let i = self.emotions.index_of(e)?;
        Some(self.smoothed.as_ref()?.iter().map(|v| v.values[i]).collect())
    }
}

/// Lexicon prepared for repeated lookups.
pub struct Scorer<'a> {
    emotions: &'a EmotionSet,
    index: HashMap<&'a str, Vec<(usize, f64)>>,
}

impl<'a> Scorer<'a> {
    pub fn new(lex: &'a Lexicon) -> Self {
        Scorer {
            emotions: lex.emotions(),
            index: lex.scoring_index(),
        }
    }

    pub fn emotions(&self) -> &EmotionSet {
        self.emotions
    }

    /// Intensity of `lemma` for the emotion in column `col`, 0 when absent.
    pub fn intensity(&self, lemma: &str, col: usize) -> f64 {
        self.index
            .get(lemma)
            .and_then(|entries| entries.iter().find(|(c, _)| *c == col))
            .map_or(0.0, |(_, v)| *v)
    }

    fn accumulate<'t>(&self, words: impl IntoIterator<Item = &'t Token>) -> EmotionTotals {
        let mut totals = EmotionTotals::new(self.emotions.len());
        for t in words {
            if let Some(entries) = self.index.get(t.lemma.as_str()) {
                for &(col, v) in entries {
                    totals.0[col].add(v);
                }
            }
        }
        totals
    }

    pub fn score_document(&self, seq: &LemmaSequence, denominator: Denominator) -> Result<DocumentScore> {
        let word_count = seq.word_count();
        if word_count == 0 {
            return Err(Error::EmptyDocument(seq.doc_id.clone()));
        }
        let token_count = seq.tokens.len();
        let totals = self.accumulate(seq.words());
        let denom = match denominator {
            Denominator::Words => word_count,
            Denominator::Tokens => token_count,
        };
        Ok(DocumentScore {
            doc_id: seq.doc_id.clone(),
            emotions: self.emotions.clone(),
            word_count,
            token_count,
            denominator,
            raw: totals.raw(),
            normalized: totals.per_10k(denom),
            totals,
        })
    }

    pub fn build_arc(&self, seq: &LemmaSequence, chunking: Chunking) -> Result<EmotionArc> {
        let words: Vec<&Token> = seq.words().collect();
        let sizes = chunking.sizes(words.len())?;
        let mut chunk_totals = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &size in &sizes {
            chunk_totals.push(self.accumulate(words[start..start + size].iter().copied()));
            start += size;
        }
        Ok(EmotionArc {
            doc_id: seq.doc_id.clone(),
            title: None,
            emotions: self.emotions.clone(),
            chunking,
            chunk_sums: chunk_totals.iter().map(EmotionTotals::raw).collect(),
            raw: chunk_totals
                .iter()
                .zip(&sizes)
                .map(|(t, &n)| t.per_10k(n))
                .collect(),
            chunk_token_counts: sizes,
            smoothed: None,
            smoothing_window: None,
            chunk_totals,
        })
    }
}

/// Raw and per-10k-word emotion scores of one document, normalized by word count.
pub fn score_document(seq: &LemmaSequence, lex: &Lexicon) -> Result<DocumentScore> {
    Scorer::new(lex).score_document(seq, Denominator::Words)
}

pub fn build_arc(seq: &LemmaSequence, lex: &Lexicon, chunking: Chunking) -> Result<EmotionArc> {
    Scorer::new(lex).build_arc(seq, chunking)
}

/// Centered moving average over an odd window, truncated at the edges.
pub fn smooth_series(values: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 || window % 2 == 0 {
        return Err(Error::Config(format!(
            "smoothing window must be an odd positive integer, got {window}"
        )));
    }
    let half = window / 2;
    let n = values.len();
    Ok((0..n)
        .map(|i| {
            let span = &values[i.saturating_sub(half)..(i + half + 1).min(n)];
            let lo = span.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = span.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            // averaging offsets from the minimum keeps constant runs exact
            let offset: f64 = span.iter().map(|x| x - lo).sum::<f64>() / span.len() as f64;
            (lo + offset).clamp(lo, hi)
        })
        .collect())
}

pub fn smooth_arc(arc: &EmotionArc, window: usize) -> Result<EmotionArc> {
    let n_emotions = arc.emotions.len();
    let mut smoothed = vec![EmotionVector::zeros(Scale::Per10k, n_emotions); arc.len()];
    for col in 0..n_emotions {
        let series: Vec<f64> = arc.raw.iter().map(|v| v.values[col]).collect();
        for (dst, v) in smoothed.iter_mut().zip(smooth_series(&series, window)?) {
            dst.values[col] = v;
        }
    }
    let mut out = arc.clone();
    out.smoothed = Some(smoothed);
    out.smoothing_window = Some(window);
    Ok(out)
}

fn csv_safe(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

/// `chunk,<emotions…>[,<emotion>_smoothed…]`, 0-based chunk index, values
/// with two decimals. Each `comments` line is written first, prefixed `# `.
pub fn write_arc_csv<W: Write>(mut w: W, arc: &EmotionArc, comments: &[String]) -> std::io::Result<()> {
    for c in comments {
        writeln!(w, "# {}", csv_safe(c))?;
    }
    let names = arc.emotions.names();
    let mut header = vec!["chunk".to_string()];
    header.extend(names.iter().map(|n| n.to_string()));
    if arc.smoothed.is_some() {
        header.extend(names.iter().map(|n| format!("{n}_smoothed")));
    }
    writeln!(w, "{}", header.join(","))?;
    for (i, row) in arc.raw.iter().enumerate() {
        write!(w, "{i}")?;
        for v in &row.values {
            write!(w, ",{v:.2}")?;
        }
        if let Some(smoothed) = &arc.smoothed {
            for v in &smoothed[i].values {
                write!(w, ",{v:.2}")?;
            }
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Whole-book table: `title, word_count, <emotions…>` with two decimals.
pub fn write_totals_tsv<W: Write>(
    mut w: W,
    rows: &[(String, &DocumentScore)],
    emotions: &EmotionSet,
    comments: &[String],
) -> std::io::Result<()> {
    for c in comments {
        writeln!(w, "# {}", csv_safe(c))?;
    }
    write!(w, "title\tword_count")?;
    for n in emotions.names() {
        write!(w, "\t{n}")?;
    }
    writeln!(w)?;
    for (title, score) in rows {
        write!(w, "{}\t{}", csv_safe(title).replace('\t', " "), score.word_count)?;
        for v in &score.normalized.values {
            write!(w, "\t{v:.2}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LoadOptions;

    fn lex(src: &str) -> Lexicon {
        Lexicon::load("t", src.as_bytes(), &LoadOptions::default()).unwrap().0
    }

    #[test]
    fn ten_words_two_joy_hits() {
        let seq = LemmaSequence::from_text("d", "ilo a b c d ilo e f g h");
        let s = score_document(&seq, &lex("ilo\tjoy\t0.8\n")).unwrap();
        let set = EmotionSet::default();
        assert_eq!(s.word_count, 10);
        assert_eq!(s.raw.get(&set, Emotion::Joy), Some(1.6));
        assert_eq!(s.normalized.get(&set, Emotion::Joy), Some(1600.0));
        for e in set.iter().filter(|&e| e != Emotion::Joy) {
            assert_eq!(s.normalized.get(&set, e), Some(0.0));
        }
        assert_eq!(s.normalized.scale, Scale::Per10k);
        assert_eq!(s.raw.scale, Scale::Raw);
    }

    #[test]
    fn punctuation_excluded_unless_token_denominator() {
        let seq = LemmaSequence::from_text("d", "ilo , ilo .");
        let l = lex("ilo\tjoy\t0.5\n");
        let scorer = Scorer::new(&l);
        let words = scorer.score_document(&seq, Denominator::Words).unwrap();
        let tokens = scorer.score_document(&seq, Denominator::Tokens).unwrap();
        assert_eq!(words.normalized.values[4], 5000.0);
        assert_eq!(tokens.normalized.values[4], 2500.0);
    }

    #[test]
    fn empty_lexicon_and_empty_document() {
        let seq = LemmaSequence::from_text("d", "ilo suru");
        let s = score_document(&seq, &lex("")).unwrap();
        assert!(s.raw.values.iter().all(|&v| v == 0.0));
        let empty = LemmaSequence::from_text("e", ". , !");
        assert!(matches!(score_document(&empty, &lex("")), Err(Error::EmptyDocument(_))));
    }

    #[test]
    fn multi_emotion_lemma_counts_for_each() {
        let seq = LemmaSequence::from_text("d", "suru");
        let s = score_document(&seq, &lex("suru\tsadness\t0.7\nsuru\tfear\t0.4\n")).unwrap();
        let set = EmotionSet::default();
        assert_eq!(s.raw.get(&set, Emotion::Sadness), Some(0.7));
        assert_eq!(s.raw.get(&set, Emotion::Fear), Some(0.4));
    }

    #[test]
    fn chunk_sizes() {
        assert_eq!(Chunking::Count { n_chunks: 4 }.sizes(100).unwrap(), vec![25; 4]);
        assert_eq!(Chunking::Count { n_chunks: 3 }.sizes(10).unwrap(), vec![4, 3, 3]);
        assert_eq!(Chunking::Window { window_tokens: 4 }.sizes(10).unwrap(), vec![4, 4, 2]);
        assert_eq!(Chunking::Window { window_tokens: 5 }.sizes(10).unwrap(), vec![5, 5]);
        assert!(matches!(
            Chunking::Count { n_chunks: 5 }.sizes(3),
            Err(Error::Chunking { words: 3, chunks: 5 })
        ));
        assert!(matches!(Chunking::Count { n_chunks: 0 }.sizes(3), Err(Error::Config(_))));
    }

    #[test]
    fn joy_in_final_quarter() {
        let text = format!("{} {}", vec!["sana"; 30].join(" "), vec!["ilo"; 10].join(" "));
        let seq = LemmaSequence::from_text("d", &text);
        let arc = build_arc(&seq, &lex("ilo\tjoy\t0.5\n"), Chunking::Count { n_chunks: 4 }).unwrap();
        assert_eq!(arc.series(Emotion::Joy).unwrap(), vec![0.0, 0.0, 0.0, 5000.0]);
        assert_eq!(arc.chunk_token_counts, vec![10; 4]);
    }

    #[test]
    fn smoothing_hand_cases() {
        assert_eq!(smooth_series(&[0.0, 0.0, 9.0, 0.0, 0.0], 3).unwrap(), vec![0.0, 3.0, 3.0, 3.0, 0.0]);
        let raw = [1.5, 2.25, 0.1, 7.0];
        assert_eq!(smooth_series(&raw, 1).unwrap(), raw);
        assert_eq!(smooth_series(&[0.1; 7], 5).unwrap(), vec![0.1; 7]);
        assert!(matches!(smooth_series(&raw, 2), Err(Error::Config(_))));
        assert!(matches!(smooth_series(&raw, 0), Err(Error::Config(_))));
        assert!(smooth_series(&[], 3).unwrap().is_empty());
    }

    #[test]
    fn csv_layout() {
        let seq = LemmaSequence::from_text("d", "ilo suru ilo");
        let l = lex("ilo\tjoy\t0.5\nsuru\tsadness\t0.25\n");
        let arc = build_arc(&seq, &l, Chunking::Count { n_chunks: 1 }).unwrap();
        let mut out = Vec::new();
        write_arc_csv(&mut out, &arc, &[]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "chunk,anger,anticipation,disgust,fear,joy,sadness,trust\n0,0.00,0.00,0.00,0.00,3333.33,833.33,0.00\n"
        );
        let smoothed = smooth_arc(&arc, 3).unwrap();
        let mut out = Vec::new();
        write_arc_csv(&mut out, &smoothed, &["run".into()]).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# run");
        assert_eq!(lines[1].split(',').count(), 15);
        assert!(lines[1].ends_with("trust_smoothed"));
    }
}
