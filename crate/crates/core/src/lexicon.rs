//! Word-emotion intensity lexicons in the NRC tab-separated format.
//!
//! A [`Lexicon`] is immutable: [`Lexicon::edit`] returns a new value and
//! appends the command to the edit log, so replaying the log over the
//! original reproduces the edited lexicon.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::emotion::{Emotion, EmotionSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Original,
    ManualAdd,
    ManualEdit,
    EmbeddingCopy { source: String, cosine: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub lemma: String,
    pub emotion: Emotion,
    pub intensity: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EditCommand {
    Add {
        lemma: String,
        emotion: Emotion,
        intensity: f64,
    },
    RemoveLemma {
        lemma: String,
    },
    /// Replaces the target's entries with a copy of the source's. `cosine` is
    /// set when the copy comes from an accepted embedding proposal.
    CopyEntries {
        source: String,
        target: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cosine: Option<f64>,
    },
}

/// How duplicate `(lemma, emotion)` rows are handled on load.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dedupe {
    #[default]
    Error,
    KeepMax,
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub emotions: EmotionSet,
    pub dedupe: Dedupe,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LoadReport {
    pub rows: usize,
    /// Rows for Plutchik emotions outside the active set (e.g. surprise).
    pub skipped_inactive: usize,
    pub merged_duplicates: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    pub name: String,
    emotions: EmotionSet,
    entries: BTreeMap<(String, Emotion), (f64, Provenance)>,
    edit_log: Vec<EditCommand>,
}

fn check_intensity(value: f64, line: usize) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Range { line, value })
    }
}

impl Lexicon {
    pub fn new(name: impl Into<String>, emotions: EmotionSet) -> Self {
        Lexicon {
            name: name.into(),
            emotions,
            entries: BTreeMap::new(),
            edit_log: Vec::new(),
        }
    }

    /// Reads `word<TAB>emotion<TAB>intensity` rows; a header row is allowed.
    pub fn load<R: BufRead>(name: impl Into<String>, reader: R, opts: &LoadOptions) -> Result<(Self, LoadReport)> {
        let mut lex = Lexicon::new(name, opts.emotions.clone());
        let mut report = LoadReport::default();
        let mut duplicates = BTreeSet::new();
        let mut header_seen = false;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 3 tab-separated columns, found {}", cols.len()),
                });
            }
            let intensity = match cols[2].trim().parse::<f64>() {
                Ok(v) => v,
                Err(_) if report.rows == 0 && !header_seen => {
                    header_seen = true;
                    continue;
                }
                Err(e) => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("bad intensity `{}`: {e}", cols[2]),
                    })
                }
            };
            let emotion: Emotion = cols[1].parse().map_err(|_| Error::UnknownEmotion {
                line: line_no,
                name: cols[1].to_string(),
            })?;
            let intensity = check_intensity(intensity, line_no)?;
            report.rows += 1;
            if !lex.emotions.contains(emotion) {
                report.skipped_inactive += 1;
                continue;
            }
            let lemma = cols[0].trim().to_string();
            if lemma.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "empty lemma".into(),
                });
            }
            match lex.entries.entry((lemma, emotion)) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert((intensity, Provenance::Original));
                }
                std::collections::btree_map::Entry::Occupied(mut o) => match opts.dedupe {
                    Dedupe::Error => {
                        duplicates.insert((o.key().0.clone(), emotion.name().to_string()));
                    }
                    Dedupe::KeepMax => {
                        report.merged_duplicates += 1;
                        if intensity > o.get().0 {
                            o.get_mut().0 = intensity;
                        }
                    }
                },
            }
        }
        if !duplicates.is_empty() {
            return Err(Error::Duplicate(duplicates.into_iter().collect()));
        }
        Ok((lex, report))
    }

    /// Writes entries sorted by lemma then emotion, intensities in shortest
    /// round-trip form, LF line endings, no header.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for ((lemma, emotion), (intensity, _)) in &self.entries {
            writeln!(w, "{lemma}\t{emotion}\t{intensity}")?;
        }
        Ok(())
    }

    pub fn to_tsv_string(&self) -> String {
        let mut out = Vec::new();
        self.write_tsv(&mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("lexicon text is UTF-8")
    }

    pub fn emotions(&self) -> &EmotionSet {
        &self.emotions
    }

    pub fn edit_log(&self) -> &[EditCommand] {
        &self.edit_log
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_lemma(&self, lemma: &str) -> bool {
        self.lemma_entries(lemma).next().is_some()
    }

    pub fn intensity(&self, lemma: &str, emotion: Emotion) -> Option<f64> {
        self.entries
            .get(&(lemma.to_string(), emotion))
            .map(|(v, _)| *v)
    }

    pub fn entries(&self) -> impl Iterator<Item = LexiconEntry> + '_ {
        self.entries.iter().map(|((lemma, emotion), (intensity, provenance))| LexiconEntry {
            lemma: lemma.clone(),
            emotion: *emotion,
            intensity: *intensity,
            provenance: provenance.clone(),
        })
    }

    /// `(emotion, intensity)` pairs of one lemma, in emotion order.
    pub fn lemma_entries<'a>(&'a self, lemma: &str) -> impl Iterator<Item = (Emotion, f64)> + 'a {
        let lo = (lemma.to_string(), Emotion::ALL[0]);
        let hi = (lemma.to_string(), Emotion::ALL[Emotion::ALL.len() - 1]);
        self.entries
            .range(lo..=hi)
            .map(|((_, e), (v, _))| (*e, *v))
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> + '_ {
        let mut prev: Option<&str> = None;
        self.entries.keys().filter_map(move |(l, _)| {
            if prev == Some(l.as_str()) {
                None
            } else {
                prev = Some(l.as_str());
                prev
            }
        })
    }

    /// Entries compared without provenance or log.
    pub fn same_entries(&self, other: &Lexicon) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|((ka, (va, _)), (kb, (vb, _)))| ka == kb && va == vb)
    }

    /// Applies one command, returning a new lexicon.
    pub fn edit(&self, command: EditCommand) -> Result<Lexicon> {
        let mut next = self.clone();
        next.apply_in_place(&command)?;
        next.edit_log.push(command);
        Ok(next)
    }

    fn apply_in_place(&mut self, command: &EditCommand) -> Result<()> {
        match command {
            EditCommand::Add {
                lemma,
                emotion,
                intensity,
            } => {
                check_intensity(*intensity, 0)?;
                if !self.emotions.contains(*emotion) {
                    return Err(Error::UnknownEmotion {
                        line: 0,
                        name: emotion.name().to_string(),
                    });
                }
                let key = (lemma.clone(), *emotion);
                let provenance = if self.entries.contains_key(&key) {
                    Provenance::ManualEdit
                } else {
                    Provenance::ManualAdd
                };
                self.entries.insert(key, (*intensity, provenance));
            }
            EditCommand::RemoveLemma { lemma } => {
                self.entries.retain(|(l, _), _| l != lemma);
            }
            EditCommand::CopyEntries {
                source,
                target,
                cosine,
            } => {
                let copied: Vec<(Emotion, f64)> = self.lemma_entries(source).collect();
                if copied.is_empty() {
                    return Err(Error::MissingLemma(source.clone()));
                }
                let provenance = match cosine {
                    Some(c) => Provenance::EmbeddingCopy {
                        source: source.clone(),
                        cosine: *c,
                    },
                    None => Provenance::ManualAdd,
                };
                if source != target {
                    self.entries.retain(|(l, _), _| l != target);
                    for (emotion, intensity) in copied {
                        self.entries
                            .insert((target.clone(), emotion), (intensity, provenance.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-applies `log` to `self`.
    pub fn replay(&self, log: &[EditCommand]) -> Result<Lexicon> {
        log.iter().try_fold(self.clone(), |lex, cmd| lex.edit(cmd.clone()))
    }

    /// Writes the edit log as JSON lines.
    pub fn write_edit_log<W: Write>(&self, mut w: W) -> Result<()> {
        for cmd in &self.edit_log {
            serde_json::to_writer(&mut w, cmd)?;
            w.write_all(b"\n").map_err(|e| Error::io("<edit log>", e))?;
        }
        Ok(())
    }

    /// Lookup table for scoring: lemma → (column index, intensity) over the
    /// lexicon's active emotions.
    pub fn scoring_index(&self) -> HashMap<&str, Vec<(usize, f64)>> {
        let mut index: HashMap<&str, Vec<(usize, f64)>> = HashMap::new();
        for ((lemma, emotion), (intensity, _)) in &self.entries {
            if let Some(col) = self.emotions.index_of(*emotion) {
                index.entry(lemma.as_str()).or_default().push((col, *intensity));
            }
        }
        index
    }
}

/// Reads an edit log written by [`Lexicon::write_edit_log`].
pub fn read_edit_log<R: BufRead>(reader: R) -> Result<Vec<EditCommand>> {
    let mut log = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        log.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?);
    }
    Ok(log)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LexiconStats {
    pub emotions: Vec<Emotion>,
    pub lemma_count: usize,
    pub counts: Vec<usize>,
    /// `co_annotation[i][j]` = |lemmas with i and j| / |lemmas with i|;
    /// `None` when emotion i has no lemmas.
    pub co_annotation: Vec<Vec<Option<f64>>>,
}

impl LexiconStats {
    pub fn count(&self, e: Emotion) -> Option<usize> {
        self.emotions.iter().position(|&x| x == e).map(|i| self.counts[i])
    }

    pub fn co(&self, from: Emotion, to: Emotion) -> Option<f64> {
        let i = self.emotions.iter().position(|&x| x == from)?;
        let j = self.emotions.iter().position(|&x| x == to)?;
        self.co_annotation[i][j]
    }
}

pub fn lexicon_stats(lex: &Lexicon) -> LexiconStats {
    let emotions: Vec<Emotion> = lex.emotions().iter().collect();
    let n = emotions.len();
    let mut counts = vec![0usize; n];
    let mut both = vec![vec![0usize; n]; n];
    let mut lemma_count = 0;
    let mut cols = Vec::with_capacity(n);
    for lemma in lex.lemmas() {
        lemma_count += 1;
        cols.clear();
        cols.extend(
            lex.lemma_entries(lemma)
                .filter_map(|(e, _)| lex.emotions().index_of(e)),
        );
        for &i in &cols {
            counts[i] += 1;
            for &j in &cols {
                both[i][j] += 1;
            }
        }
    }
    let co_annotation = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (counts[i] > 0).then(|| both[i][j] as f64 / counts[i] as f64))
                .collect()
        })
        .collect();
    LexiconStats {
        emotions,
        lemma_count,
        counts,
        co_annotation,
    }
}
