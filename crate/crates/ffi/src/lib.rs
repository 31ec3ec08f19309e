//! C ABI for emoarc.
//!
//! Objects are handed out as opaque pointers and must be released with the
//! matching `*_free` function. Every fallible call returns an
//! [`EmoarcStatus`]; on failure a message is available from
//! [`emoarc_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use emoarc::arcs::{smooth_arc, write_arc_csv, Chunking, Denominator, Scorer};
use emoarc::embeddings::cosine;
use emoarc::emotion::{Emotion, EmotionSet};
use emoarc::lexicon::{Lexicon, LoadOptions};
use emoarc::stats::permutation_test;
use emoarc::textproc::{read_conllu, LemmaSequence};
use emoarc::{EmotionArc, Error};

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmoarcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Config = 5,
    EmptyInput = 6,
    BufferTooSmall = 7,
    Panic = 8,
    Other = 9,
}

/// A loaded emotion lexicon.
pub struct EmoarcLexicon(Lexicon);

/// A tokenized document.
pub struct EmoarcSequence(LemmaSequence);

/// A chunked (and optionally smoothed) emotion arc.
pub struct EmoarcArc(EmotionArc);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    let c = CString::new(message).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EmoarcStatus {
    match e {
        Error::Io { .. } => EmoarcStatus::Io,
        Error::Decode(_) => EmoarcStatus::InvalidUtf8,
        Error::Parse { .. }
        | Error::Range { .. }
        | Error::Duplicate(_)
        | Error::UnknownEmotion { .. }
        | Error::MarkerOrder { .. }
        | Error::Json(_) => EmoarcStatus::Parse,
        Error::Config(_) | Error::Chunking { .. } | Error::Dim(..) | Error::ZeroVector | Error::MissingLemma(_) => {
            EmoarcStatus::Config
        }
        Error::EmptyDocument(_) | Error::EmptyVocab(_) => EmoarcStatus::EmptyInput,
    }
}

struct Fail(EmoarcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EmoarcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EmoarcStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside emoarc");
            EmoarcStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(EmoarcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(EmoarcStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

fn emotion_set(list: Option<&str>) -> Result<EmotionSet, Fail> {
    Ok(match list {
        Some(s) => EmotionSet::parse_list(s)?,
        None => EmotionSet::default(),
    })
}

fn load_lexicon(name: &str, tsv: &[u8], emotions: *const c_char) -> Result<Lexicon, Fail> {
    let emotions = if emotions.is_null() {
        None
    } else {
        Some(unsafe { str_arg(emotions, "emotions")? })
    };
    let opts = LoadOptions {
        emotions: emotion_set(emotions)?,
        ..Default::default()
    };
    Ok(Lexicon::load(name, tsv, &opts)?.0)
}

fn out_ptr<T>(out: *mut *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(null("out"))
    } else {
        Ok(())
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn emoarc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn emoarc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a lexicon from TSV text (`lemma`, `emotion`, `intensity`).
/// `emotions` is a comma-separated list of active emotions, or NULL for the
/// default seven.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn emoarc_lexicon_from_tsv(
    tsv: *const c_char,
    emotions: *const c_char,
    out: *mut *mut EmoarcLexicon,
) -> EmoarcStatus {
    guard(|| {
        out_ptr(out)?;
        let tsv = str_arg(tsv, "tsv")?;
        let lex = load_lexicon("lexicon", tsv.as_bytes(), emotions)?;
        *out = Box::into_raw(Box::new(EmoarcLexicon(lex)));
        Ok(())
    })
}

/// Reads a lexicon TSV file.
///
/// # Safety
/// See [`emoarc_lexicon_from_tsv`].
#[no_mangle]
pub unsafe extern "C" fn emoarc_lexicon_from_path(
    path: *const c_char,
    emotions: *const c_char,
    out: *mut *mut EmoarcLexicon,
) -> EmoarcStatus {
    guard(|| {
        out_ptr(out)?;
        let path = str_arg(path, "path")?;
        let bytes = std::fs::read(path).map_err(|e| Fail(EmoarcStatus::Io, format!("{path}: {e}")))?;
        let name = std::path::Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let lex = load_lexicon(&name, &bytes, emotions)?;
        *out = Box::into_raw(Box::new(EmoarcLexicon(lex)));
        Ok(())
    })
}

/// Number of `(lemma, emotion)` entries, or 0 for NULL.
///
/// # Safety
/// `lex` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn emoarc_lexicon_len(lex: *const EmoarcLexicon) -> usize {
    lex.as_ref().map_or(0, |l| l.0.len())
}

/// Number of active emotions, which is the length score buffers need.
///
/// # Safety
/// `lex` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn emoarc_lexicon_emotion_count(lex: *const EmoarcLexicon) -> usize {
    lex.as_ref().map_or(0, |l| l.0.emotions().len())
}

/// Name of the `index`-th active emotion (alphabetical order) as a static
/// string, or NULL when out of range.
///
/// # Safety
/// `lex` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn emoarc_lexicon_emotion_name(lex: *const EmoarcLexicon, index: usize) -> *const c_char {
    match lex.as_ref().and_then(|l| l.0.emotions().as_slice().get(index)) {
        Some(e) => emotion_cstr(*e).as_ptr(),
        None => ptr::null(),
    }
}

fn emotion_cstr(e: Emotion) -> &'static CStr {
    match e {
        Emotion::Anger => c"anger",
        Emotion::Anticipation => c"anticipation",
        Emotion::Disgust => c"disgust",
        Emotion::Fear => c"fear",
        Emotion::Joy => c"joy",
        Emotion::Sadness => c"sadness",
        Emotion::Surprise => c"surprise",
        Emotion::Trust => c"trust",
    }
}

/// # Safety
/// `lex` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn emoarc_lexicon_free(lex: *mut EmoarcLexicon) {
    if !lex.is_null() {
        drop(Box::from_raw(lex));
    }
}

/// Tokenizes plain text. Lemmas are lowercased surface forms.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn emoarc_sequence_from_text(
    doc_id: *const c_char,
    text: *const c_char,
    out: *mut *mut EmoarcSequence,
) -> EmoarcStatus {
    guard(|| {
        out_ptr(out)?;
        let id = str_arg(doc_id, "doc_id")?;
        let text = str_arg(text, "text")?;
        *out = Box::into_raw(Box::new(EmoarcSequence(LemmaSequence::from_text(id, text))));
        Ok(())
    })
}

/// Reads lemmas from CoNLL-U text.
///
/// # Safety
/// See [`emoarc_sequence_from_text`].
#[no_mangle]
pub unsafe extern "C" fn emoarc_sequence_from_conllu(
    doc_id: *const c_char,
    conllu: *const c_char,
    out: *mut *mut EmoarcSequence,
) -> EmoarcStatus {
    guard(|| {
        out_ptr(out)?;
        let id = str_arg(doc_id, "doc_id")?;
        let text = str_arg(conllu, "conllu")?;
        let seq = read_conllu(id, text.as_bytes())?;
        *out = Box::into_raw(Box::new(EmoarcSequence(seq)));
        Ok(())
    })
}

/// Number of word tokens (punctuation excluded), or 0 for NULL.
///
/// # Safety
/// `seq` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn emoarc_sequence_word_count(seq: *const EmoarcSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.0.word_count())
}

/// # Safety
/// `seq` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn emoarc_sequence_free(seq: *mut EmoarcSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Scores a whole document. `raw` and `normalized` (per 10,000 words) each
/// receive one value per active emotion; either may be NULL. `len` is the
/// capacity of each buffer.
///
/// # Safety
/// Non-NULL buffers must hold at least `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn emoarc_score_document(
    lex: *const EmoarcLexicon,
    seq: *const EmoarcSequence,
    raw: *mut f64,
    normalized: *mut f64,
    len: usize,
) -> EmoarcStatus {
    guard(|| {
        let lex = ref_arg(lex, "lex")?;
        let seq = ref_arg(seq, "seq")?;
        let n = lex.0.emotions().len();
        if len < n {
            return Err(Fail(
                EmoarcStatus::BufferTooSmall,
                format!("buffer holds {len} values, {n} needed"),
            ));
        }
        let score = Scorer::new(&lex.0).score_document(&seq.0, Denominator::Words)?;
        if !raw.is_null() {
            ptr::copy_nonoverlapping(score.raw.values.as_ptr(), raw, n);
        }
        if !normalized.is_null() {
            ptr::copy_nonoverlapping(score.normalized.values.as_ptr(), normalized, n);
        }
        Ok(())
    })
}

/// Builds an arc. With `window_tokens > 0` chunks are fixed windows of that
/// many words, otherwise the document is split into `n_chunks`. A
/// `smoothing_window` of 0 skips smoothing; otherwise it must be odd.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn emoarc_arc_build(
    lex: *const EmoarcLexicon,
    seq: *const EmoarcSequence,
    n_chunks: usize,
    window_tokens: usize,
    smoothing_window: usize,
    out: *mut *mut EmoarcArc,
) -> EmoarcStatus {
    guard(|| {
        out_ptr(out)?;
        let lex = ref_arg(lex, "lex")?;
        let seq = ref_arg(seq, "seq")?;
        let chunking = if window_tokens > 0 {
            Chunking::Window { window_tokens }
        } else {
            Chunking::Count { n_chunks }
        };
        let mut arc = Scorer::new(&lex.0).build_arc(&seq.0, chunking)?;
        if smoothing_window > 0 {
            arc = smooth_arc(&arc, smoothing_window)?;
        }
        *out = Box::into_raw(Box::new(EmoarcArc(arc)));
        Ok(())
    })
}

/// Number of chunks, or 0 for NULL.
///
/// # Safety
/// `arc` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn emoarc_arc_len(arc: *const EmoarcArc) -> usize {
    arc.as_ref().map_or(0, |a| a.0.len())
}

/// Copies one emotion's per-chunk series (per 10,000 words) into `values`.
/// With `smoothed` set the smoothed series is returned, which fails when the
/// arc was built without smoothing.
///
/// # Safety
/// `emotion` must be NUL-terminated; `values` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn emoarc_arc_values(
    arc: *const EmoarcArc,
    emotion: *const c_char,
    smoothed: bool,
    values: *mut f64,
    len: usize,
) -> EmoarcStatus {
    guard(|| {
        let arc = ref_arg(arc, "arc")?;
        let emotion: Emotion = str_arg(emotion, "emotion")?.parse()?;
        if values.is_null() {
            return Err(null("values"));
        }
        let series = if smoothed {
            arc.0.smoothed_series(emotion)
        } else {
            arc.0.series(emotion)
        };
        let series = series.ok_or_else(|| {
            Fail(
                EmoarcStatus::Config,
                format!("no {} series for `{emotion}`", if smoothed { "smoothed" } else { "raw" }),
            )
        })?;
        if len < series.len() {
            return Err(Fail(
                EmoarcStatus::BufferTooSmall,
                format!("buffer holds {len} values, {} needed", series.len()),
            ));
        }
        ptr::copy_nonoverlapping(series.as_ptr(), values, series.len());
        Ok(())
    })
}

/// Renders the arc as CSV. The string must be released with
/// [`emoarc_string_free`].
///
/// # Safety
/// `arc` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn emoarc_arc_to_csv(arc: *const EmoarcArc, out: *mut *mut c_char) -> EmoarcStatus {
    guard(|| {
        out_ptr(out)?;
        let arc = ref_arg(arc, "arc")?;
        let mut buf = Vec::new();
        write_arc_csv(&mut buf, &arc.0, &[]).map_err(|e| Fail(EmoarcStatus::Io, e.to_string()))?;
        *out = CString::new(buf)
            .map_err(|_| Fail(EmoarcStatus::Other, "CSV contains a NUL byte".into()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `arc` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn emoarc_arc_free(arc: *mut EmoarcArc) {
    if !arc.is_null() {
        drop(Box::from_raw(arc));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn emoarc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Cosine similarity of two `len`-dimensional vectors.
///
/// # Safety
/// `u` and `v` must each hold `len` floats; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn emoarc_cosine(u: *const f32, v: *const f32, len: usize, out: *mut f64) -> EmoarcStatus {
    guard(|| {
        if u.is_null() || v.is_null() || out.is_null() {
            return Err(null("vector or out"));
        }
        let (u, v) = (std::slice::from_raw_parts(u, len), std::slice::from_raw_parts(v, len));
        *out = cosine(u, v)?;
        Ok(())
    })
}

/// Two-sided permutation test for the per-10k difference in one emotion
/// between documents `a` and `b`. Either output pointer may be NULL.
///
/// # Safety
/// Handles must be live; `emotion` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn emoarc_permutation_test(
    lex: *const EmoarcLexicon,
    a: *const EmoarcSequence,
    b: *const EmoarcSequence,
    emotion: *const c_char,
    n_permutations: usize,
    seed: u64,
    observed_diff: *mut f64,
    p_value: *mut f64,
) -> EmoarcStatus {
    guard(|| {
        let lex = ref_arg(lex, "lex")?;
        let a = ref_arg(a, "a")?;
        let b = ref_arg(b, "b")?;
        let emotion: Emotion = str_arg(emotion, "emotion")?.parse()?;
        let result = permutation_test(&a.0, &b.0, &lex.0, emotion, n_permutations, seed)?;
        if !observed_diff.is_null() {
            *observed_diff = result.observed_diff;
        }
        if !p_value.is_null() {
            *p_value = result.p_value;
        }
        Ok(())
    })
}
