//! Project Gutenberg plain-text ingestion: boilerplate stripping, header
//! metadata extraction and chapter splitting.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::LazyLock;

use rayon::prelude::*;
use regex::{Regex, RegexBuilder};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CHAPTER_PATTERNS: &str = include_str!("../assets/chapter_patterns.txt");

/// Lines scanned for metadata when a file has no start marker.
const HEADER_FALLBACK_LINES: usize = 200;
/// Lines of body scanned for a printed publication year.
const FRONT_MATTER_LINES: usize = 60;

static START_MARKER: LazyLock<Regex> = LazyLock::new(|| {
    RegexBuilder::new(r"^\s*\*{3}\s*START\s+OF\s+(THE|THIS)\s+PROJECT\s+GUTENBERG\s+E-?BOOK\b.*$")
        .case_insensitive(true)
        .build()
        .unwrap()
});

static END_MARKER: LazyLock<Regex> = LazyLock::new(|| {
    RegexBuilder::new(
        r"^\s*(\*{3}\s*END\s+OF\s+(THE|THIS)\s+PROJECT\s+GUTENBERG\s+E-?BOOK\b.*|END\s+OF\s+(THE\s+)?PROJECT\s+GUTENBERG('S)?\s+(E-?BOOK\b)?.*)$",
    )
    .case_insensitive(true)
    .build()
    .unwrap()
});

static TITLE: LazyLock<Regex> = LazyLock::new(|| field_regex("Title"));
static AUTHOR: LazyLock<Regex> = LazyLock::new(|| field_regex("Author"));
static LANGUAGE: LazyLock<Regex> = LazyLock::new(|| field_regex("Language"));
static PUBLICATION: LazyLock<Regex> = LazyLock::new(|| {
    RegexBuilder::new(
        r"^\s*(Original\s+publication|Publication\s+date|First\s+published|Published)\s*:?.*?\b(1[5-9][0-9]{2}|20[0-9]{2})\b",
    )
    .case_insensitive(true)
    .multi_line(true)
    .build()
    .unwrap()
});
static TRANSLATOR: LazyLock<Regex> = LazyLock::new(|| {
    RegexBuilder::new(r"^\s*(Translator\s*:|Translated\s+by\b|Suomentanut\b|Suomentaja\b|Suomennos\b|Suom\.)")
        .case_insensitive(true)
        .multi_line(true)
        .build()
        .unwrap()
});
static YEAR_LINE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^[\p{L}\s,.:]*\b(1[5-9][0-9]{2}|20[0-9]{2})\.?\s*$").unwrap()
});

fn field_regex(name: &str) -> Regex {
    RegexBuilder::new(&format!(r"^\s*{name}\s*:\s*(.+?)\s*$"))
        .case_insensitive(true)
        .multi_line(true)
        .build()
        .unwrap()
}

#[derive(Debug, Clone)]
pub struct RawBook {
    pub source_path: PathBuf,
    pub bytes: Vec<u8>,
}

impl RawBook {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Ok(RawBook {
            source_path: path.to_path_buf(),
            bytes,
        })
    }

    pub fn decode(&self) -> Result<&str> {
        let text = std::str::from_utf8(&self.bytes)
            .map_err(|_| Error::Decode(self.source_path.display().to_string()))?;
        Ok(text.strip_prefix('\u{feff}').unwrap_or(text))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub title: Option<String>,
    pub author: Option<String>,
    pub year: Option<u16>,
    pub language: Option<String>,
    pub originally_finnish: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub metadata: Metadata,
    pub chapters: Vec<String>,
    pub body: String,
}

impl Document {
    /// Title from metadata, falling back to the document id.
    pub fn display_title(&self) -> &str {
        self.metadata.title.as_deref().unwrap_or(&self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripped<'a> {
    pub header: &'a str,
    pub body: &'a str,
    pub start_found: bool,
    pub end_found: bool,
}

impl Stripped<'_> {
    pub fn markers_found(&self) -> bool {
        self.start_found || self.end_found
    }
}

/// Removes the Project Gutenberg licence header and footer.
///
/// The body runs from the line after the last start marker preceding the
/// first end marker up to (excluding) that end marker. Without markers the
/// whole text is returned and both flags are false.
pub fn strip_gutenberg(text: &str) -> Result<Stripped<'_>> {
    let mut offset = 0;
    let mut start: Option<(usize, usize, usize)> = None; // (line, line start, line end)
    let mut first_start_line = None;
    let mut end: Option<(usize, usize)> = None;
    for (idx, line) in text.split_inclusive('\n').enumerate() {
        let content = line.trim_end_matches(['\n', '\r']);
        if START_MARKER.is_match(content) {
            first_start_line.get_or_insert(idx + 1);
            start = Some((idx + 1, offset, offset + line.len()));
        } else if END_MARKER.is_match(content) {
            end = Some((idx + 1, offset));
            break;
        }
        offset += line.len();
    }

    if let (None, Some((end_line, _))) = (start, end) {
        // only an error if a start marker appears after the end marker
        let after = &text[end.unwrap().1..];
        if let Some(pos) = after
            .split_inclusive('\n')
            .position(|l| START_MARKER.is_match(l.trim_end_matches(['\n', '\r'])))
        {
            return Err(Error::MarkerOrder {
                start_line: end_line + pos,
                end_line,
            });
        }
    }

    let (header, body_start) = match start {
        Some((_, line_start, line_end)) => (&text[..line_start], line_end),
        None => (&text[..0], 0),
    };
    let body_end = end.map(|(_, o)| o).unwrap_or(text.len());
    Ok(Stripped {
        header,
        body: &text[body_start..body_end],
        start_found: start.is_some(),
        end_found: end.is_some(),
    })
}

/// Reads `Title:`, `Author:`, `Language:` and publication-year lines.
/// Fields without a match stay `None`.
pub fn extract_metadata(header: &str) -> Metadata {
    let capture = |re: &Regex| {
        re.captures(header)
            .map(|c| c[1].trim().to_string())
            .filter(|s| !s.is_empty())
    };
    let title = capture(&TITLE);
    let author = capture(&AUTHOR);
    let language = capture(&LANGUAGE);
    let year = PUBLICATION
        .captures(header)
        .and_then(|c| c[2].parse::<u16>().ok());
    let translated = TRANSLATOR.is_match(header);
    let originally_finnish = match (&language, translated) {
        (_, true) => Some(false),
        (Some(lang), false) if lang.to_lowercase().starts_with("finnish") => Some(true),
        _ => None,
    };
    Metadata {
        title,
        author,
        year,
        language,
        originally_finnish,
    }
}

/// The header region used for metadata: text before the start marker, or the
/// first 200 lines when there is none.
pub fn header_region<'a>(text: &'a str, stripped: &Stripped<'a>) -> &'a str {
    if stripped.start_found {
        stripped.header
    } else {
        let end = text
            .split_inclusive('\n')
            .take(HEADER_FALLBACK_LINES)
            .map(str::len)
            .sum();
        &text[..end]
    }
}

/// Finds a title-page year such as `Porvoo, 1884.` near the start of a body.
pub fn front_matter_year(body: &str) -> Option<u16> {
    body.lines()
        .take(FRONT_MATTER_LINES)
        .filter_map(|l| YEAR_LINE.captures(l.trim()))
        .find_map(|c| c[1].parse().ok())
}

/// Compiled chapter heading patterns.
#[derive(Debug, Clone)]
pub struct ChapterPatterns {
    patterns: Vec<Regex>,
}

impl Default for ChapterPatterns {
    fn default() -> Self {
        ChapterPatterns::parse(DEFAULT_CHAPTER_PATTERNS).expect("bundled chapter patterns compile")
    }
}

impl ChapterPatterns {
    /// One regex per line; `#` comments and blank lines skipped.
    pub fn parse(source: &str) -> Result<Self> {
        let patterns = source
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| {
                Regex::new(l.trim()).map_err(|e| Error::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChapterPatterns { patterns })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let source = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&source)
    }

    pub fn is_heading(&self, line: &str) -> bool {
        let line = line.trim_end();
        line.chars().any(char::is_alphanumeric) && self.patterns.iter().any(|p| p.is_match(line))
    }
}

/// Splits `body` at chapter heading lines. Each heading belongs to the
/// chapter it opens, so the chapters concatenate back to `body` exactly.
/// Text before the first heading becomes its own chapter unless it is only
/// whitespace, in which case it is folded into the first chapter.
pub fn chapterize(body: &str, patterns: &ChapterPatterns) -> Vec<String> {
    let mut cuts = Vec::new();
    let mut offset = 0;
    for line in body.split_inclusive('\n') {
        if patterns.is_heading(line.trim_end_matches(['\n', '\r'])) {
            cuts.push(offset);
        }
        offset += line.len();
    }
    if cuts.first().is_some_and(|&first| body[..first].trim().is_empty()) {
        cuts.remove(0);
    }
    let mut chapters = Vec::with_capacity(cuts.len() + 1);
    let mut prev = 0;
    for cut in cuts {
        chapters.push(body[prev..cut].to_string());
        prev = cut;
    }
    chapters.push(body[prev..].to_string());
    chapters
}

/// Builds a [`Document`] from one raw file.
pub fn ingest_book(raw: &RawBook, patterns: &ChapterPatterns) -> Result<(Document, bool)> {
    let text = raw.decode()?;
    let stripped = strip_gutenberg(text)?;
    let mut metadata = extract_metadata(header_region(text, &stripped));
    if metadata.year.is_none() {
        metadata.year = front_matter_year(stripped.body);
    }
    let body = stripped.body.to_string();
    let chapters = chapterize(&body, patterns);
    Ok((
        Document {
            id: document_id(&raw.source_path),
            metadata,
            chapters,
            body,
        },
        stripped.markers_found(),
    ))
}

pub fn document_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discarded {
    pub file: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub retained: Vec<String>,
    pub discarded: Vec<Discarded>,
    /// Retained files in which no Gutenberg marker was found.
    pub no_markers: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub report: IngestReport,
}

/// `.txt` files directly inside `dir`, sorted by file name.
pub fn list_text_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case("txt")))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// Ingests every `.txt` file in `dir`. Undecodable or malformed books are
/// listed in the report and skipped.
pub fn load_corpus(dir: impl AsRef<Path>, patterns: &ChapterPatterns) -> Result<Corpus> {
    let dir = dir.as_ref();
    let files = list_text_files(dir)?;
    let results: Vec<(String, Result<(Document, bool)>)> = files
        .par_iter()
        .map(|path| {
            let name = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let result = RawBook::read(path).and_then(|raw| ingest_book(&raw, patterns));
            (name, result)
        })
        .collect();

    let mut corpus = Corpus::default();
    if files.is_empty() {
        corpus
            .report
            .warnings
            .push(format!("no .txt files found in {}", dir.display()));
    }
    for (name, result) in results {
        match result {
            Ok((doc, markers)) => {
                if !markers {
                    corpus.report.no_markers.push(name.clone());
                }
                corpus.report.retained.push(name);
                corpus.documents.push(doc);
            }
            Err(e) => corpus.report.discarded.push(Discarded {
                file: name,
                reason: e.to_string(),
            }),
        }
    }
    Ok(corpus)
}
