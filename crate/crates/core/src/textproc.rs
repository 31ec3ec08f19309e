//! Tokens, lemma sequences and corpus statistics.
//!
//! Lemmas come either from CoNLL-U files produced by an external parser or
//! from [`tokenize`], whose fallback lemma is just the lowercased surface
//! form. Finnish inflection means the fallback misses most lexicon hits, so
//! real analyses should use CoNLL-U input.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Universal Dependencies part-of-speech tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl Upos {
    pub fn as_str(self) -> &'static str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
        }
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Upos {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "ADJ" => Upos::Adj,
            "ADP" => Upos::Adp,
            "ADV" => Upos::Adv,
            "AUX" => Upos::Aux,
            "CCONJ" => Upos::Cconj,
            "DET" => Upos::Det,
            "INTJ" => Upos::Intj,
            "NOUN" => Upos::Noun,
            "NUM" => Upos::Num,
            "PART" => Upos::Part,
            "PRON" => Upos::Pron,
            "PROPN" => Upos::Propn,
            "PUNCT" => Upos::Punct,
            "SCONJ" => Upos::Sconj,
            "SYM" => Upos::Sym,
            "VERB" => Upos::Verb,
            "X" => Upos::X,
            other => return Err(format!("invalid UPOS tag `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub upos: Option<Upos>,
    pub is_word: bool,
}

impl Token {
    /// A tokenizer token: lemma is the lowercased surface, no tag.
    pub fn from_surface(surface: &str) -> Self {
        Token {
            surface: surface.to_string(),
            lemma: surface.to_lowercase(),
            upos: None,
            is_word: surface.chars().any(char::is_alphabetic),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSequence {
    pub doc_id: String,
    pub tokens: Vec<Token>,
    /// Exclusive end index of each sentence; strictly increasing, last equals
    /// `tokens.len()` for non-empty sequences.
    pub sentence_boundaries: Vec<usize>,
}

impl LemmaSequence {
    /// Whitespace/punctuation tokenization with `.`, `!`, `?` ending sentences.
    pub fn from_text(doc_id: impl Into<String>, text: &str) -> Self {
        let tokens = tokenize(text);
        let mut sentence_boundaries: Vec<usize> = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| matches!(t.surface.as_str(), "." | "!" | "?"))
            .map(|(i, _)| i + 1)
            .collect();
        if !tokens.is_empty() && sentence_boundaries.last() != Some(&tokens.len()) {
            sentence_boundaries.push(tokens.len());
        }
        LemmaSequence {
            doc_id: doc_id.into(),
            tokens,
            sentence_boundaries,
        }
    }

    pub fn word_count(&self) -> usize {
        self.words().count()
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> + '_ {
        self.tokens.iter().filter(|t| t.is_word)
    }

    pub fn sentence_count(&self) -> usize {
        self.sentence_boundaries.len()
    }

    /// Concatenates sequences, shifting sentence boundaries.
    pub fn concat(doc_id: impl Into<String>, parts: &[LemmaSequence]) -> Self {
        let mut out = LemmaSequence {
            doc_id: doc_id.into(),
            ..Default::default()
        };
        for part in parts {
            let base = out.tokens.len();
            out.tokens.extend(part.tokens.iter().cloned());
            out.sentence_boundaries
                .extend(part.sentence_boundaries.iter().map(|b| b + base));
        }
        out
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '\'' | '’')
}

/// Splits text into tokens: whitespace separates, runs of alphanumeric
/// characters form words (keeping word-internal hyphens and apostrophes, as in
/// `Kauppa-Lopo`), every other character is a token of its own.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<(usize, char)> = chunk.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (start, c) = chars[i];
            if is_word_char(c) {
                let mut j = i + 1;
                while j < chars.len() {
                    let cj = chars[j].1;
                    if is_word_char(cj) {
                        j += 1;
                    } else if is_joiner(cj) && j + 1 < chars.len() && is_word_char(chars[j + 1].1) {
                        j += 2;
                    } else {
                        break;
                    }
                }
                let end = chars.get(j).map_or(chunk.len(), |&(o, _)| o);
                tokens.push(Token::from_surface(&chunk[start..end]));
                i = j;
            } else {
                let end = chars.get(i + 1).map_or(chunk.len(), |&(o, _)| o);
                tokens.push(Token::from_surface(&chunk[start..end]));
                i += 1;
            }
        }
    }
    tokens
}

/// Reads CoNLL-U. Multiword range rows (`1-2`) and empty nodes (`1.1`) are
/// skipped; their syntactic words are kept. A `_` lemma falls back to the
/// lowercased form.
pub fn read_conllu<R: BufRead>(doc_id: impl Into<String>, reader: R) -> Result<LemmaSequence> {
    let mut seq = LemmaSequence {
        doc_id: doc_id.into(),
        ..Default::default()
    };
    let close_sentence = |seq: &mut LemmaSequence| {
        let n = seq.tokens.len();
        if n > 0 && seq.sentence_boundaries.last() != Some(&n) {
            seq.sentence_boundaries.push(n);
        }
    };
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            close_sentence(&mut seq);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        if id.parse::<u32>().is_err() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("invalid token id `{id}`"),
            });
        }
        let form = cols[1];
        let upos = match cols[3] {
            "_" => None,
            tag => Some(tag.parse::<Upos>().map_err(|message| Error::Parse {
                line: line_no,
                message,
            })?),
        };
        let lemma = match cols[2] {
            "_" if form != "_" => form.to_lowercase(),
            "" => form.to_lowercase(),
            l => l.to_string(),
        };
        let is_word = match upos {
            Some(Upos::Punct | Upos::Sym) => false,
            Some(_) => true,
            None => form.chars().any(char::is_alphabetic),
        };
        seq.tokens.push(Token {
            surface: form.to_string(),
            lemma,
            upos,
            is_word,
        });
    }
    close_sentence(&mut seq);
    Ok(seq)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub token_count: usize,
    pub word_count: usize,
    pub type_count: usize,
    pub sentence_count: usize,
    pub ttr: f64,
    pub top_frequent: Vec<(String, usize)>,
}

/// Lemma frequencies over word tokens.
pub fn lemma_frequencies<'a>(seqs: impl IntoIterator<Item = &'a LemmaSequence>) -> HashMap<&'a str, usize> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for seq in seqs {
        for t in seq.words() {
            *counts.entry(t.lemma.as_str()).or_default() += 1;
        }
    }
    counts
}

/// Ranks lemmas by count descending, ties by lemma ascending.
pub fn rank_frequencies(counts: &HashMap<&str, usize>) -> Vec<(String, usize)> {
    let mut ranked: Vec<(String, usize)> = counts.iter().map(|(l, c)| (l.to_string(), *c)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}

pub fn corpus_stats(seqs: &[LemmaSequence], k: usize) -> CorpusStats {
    let counts = lemma_frequencies(seqs);
    let token_count = seqs.iter().map(|s| s.tokens.len()).sum();
    let word_count: usize = counts.values().sum();
    let type_count = counts.len();
    let mut top_frequent = rank_frequencies(&counts);
    top_frequent.truncate(k);
    CorpusStats {
        token_count,
        word_count,
        type_count,
        sentence_count: seqs.iter().map(LemmaSequence::sentence_count).sum(),
        ttr: if word_count > 0 {
            type_count as f64 / word_count as f64
        } else {
            0.0
        },
        top_frequent,
    }
}

/// Writes `lemma<TAB>count` lines.
pub fn write_frequency_tsv<W: Write>(mut w: W, ranked: &[(String, usize)]) -> std::io::Result<()> {
    for (lemma, count) in ranked {
        writeln!(w, "{lemma}\t{count}")?;
    }
    Ok(())
}
