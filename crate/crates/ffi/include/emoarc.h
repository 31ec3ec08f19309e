#ifndef EMOARC_H
#define EMOARC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every fallible function.
 */
typedef enum EmoarcStatus {
  EMOARC_STATUS_OK = 0,
  EMOARC_STATUS_NULL_POINTER = 1,
  EMOARC_STATUS_INVALID_UTF8 = 2,
  EMOARC_STATUS_IO = 3,
  EMOARC_STATUS_PARSE = 4,
  EMOARC_STATUS_CONFIG = 5,
  EMOARC_STATUS_EMPTY_INPUT = 6,
  EMOARC_STATUS_BUFFER_TOO_SMALL = 7,
  EMOARC_STATUS_PANIC = 8,
  EMOARC_STATUS_OTHER = 9,
} EmoarcStatus;

/**
 * A chunked (and optionally smoothed) emotion arc.
 */
typedef struct EmoarcArc EmoarcArc;

/**
 * A loaded emotion lexicon.
 */
typedef struct EmoarcLexicon EmoarcLexicon;

/**
 * A tokenized document.
 */
typedef struct EmoarcSequence EmoarcSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *emoarc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *emoarc_version(void);

/**
 * Parses a lexicon from TSV text (`lemma`, `emotion`, `intensity`).
 * `emotions` is a comma-separated list of active emotions, or NULL for the
 * default seven.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum EmoarcStatus emoarc_lexicon_from_tsv(const char *tsv,
                                          const char *emotions,
                                          struct EmoarcLexicon **out);

/**
 * Reads a lexicon TSV file.
 *
 * # Safety
 * See [`emoarc_lexicon_from_tsv`].
 */
enum EmoarcStatus emoarc_lexicon_from_path(const char *path,
                                           const char *emotions,
                                           struct EmoarcLexicon **out);

/**
 * Number of `(lemma, emotion)` entries, or 0 for NULL.
 *
 * # Safety
 * `lex` must be NULL or a live handle.
 */
size_t emoarc_lexicon_len(const struct EmoarcLexicon *lex);

/**
 * Number of active emotions, which is the length score buffers need.
 *
 * # Safety
 * `lex` must be NULL or a live handle.
 */
size_t emoarc_lexicon_emotion_count(const struct EmoarcLexicon *lex);

/**
 * Name of the `index`-th active emotion (alphabetical order) as a static
 * string, or NULL when out of range.
 *
 * # Safety
 * `lex` must be NULL or a live handle.
 */
const char *emoarc_lexicon_emotion_name(const struct EmoarcLexicon *lex, size_t index);

/**
 * # Safety
 * `lex` must be NULL or a handle not yet freed.
 */
void emoarc_lexicon_free(struct EmoarcLexicon *lex);

/**
 * Tokenizes plain text. Lemmas are lowercased surface forms.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum EmoarcStatus emoarc_sequence_from_text(const char *doc_id,
                                            const char *text,
                                            struct EmoarcSequence **out);

/**
 * Reads lemmas from CoNLL-U text.
 *
 * # Safety
 * See [`emoarc_sequence_from_text`].
 */
enum EmoarcStatus emoarc_sequence_from_conllu(const char *doc_id,
                                              const char *conllu,
                                              struct EmoarcSequence **out);

/**
 * Number of word tokens (punctuation excluded), or 0 for NULL.
 *
 * # Safety
 * `seq` must be NULL or a live handle.
 */
size_t emoarc_sequence_word_count(const struct EmoarcSequence *seq);

/**
 * # Safety
 * `seq` must be NULL or a handle not yet freed.
 */
void emoarc_sequence_free(struct EmoarcSequence *seq);

/**
 * Scores a whole document. `raw` and `normalized` (per 10,000 words) each
 * receive one value per active emotion; either may be NULL. `len` is the
 * capacity of each buffer.
 *
 * # Safety
 * Non-NULL buffers must hold at least `len` doubles.
 */
enum EmoarcStatus emoarc_score_document(const struct EmoarcLexicon *lex,
                                        const struct EmoarcSequence *seq,
                                        double *raw,
                                        double *normalized,
                                        size_t len);

/**
 * Builds an arc. With `window_tokens > 0` chunks are fixed windows of that
 * many words, otherwise the document is split into `n_chunks`. A
 * `smoothing_window` of 0 skips smoothing; otherwise it must be odd.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum EmoarcStatus emoarc_arc_build(const struct EmoarcLexicon *lex,
                                   const struct EmoarcSequence *seq,
                                   size_t n_chunks,
                                   size_t window_tokens,
                                   size_t smoothing_window,
                                   struct EmoarcArc **out);

/**
 * Number of chunks, or 0 for NULL.
 *
 * # Safety
 * `arc` must be NULL or a live handle.
 */
size_t emoarc_arc_len(const struct EmoarcArc *arc);

/**
 * Copies one emotion's per-chunk series (per 10,000 words) into `values`.
 * With `smoothed` set the smoothed series is returned, which fails when the
 * arc was built without smoothing.
 *
 * # Safety
 * `emotion` must be NUL-terminated; `values` must hold `len` doubles.
 */
enum EmoarcStatus emoarc_arc_values(const struct EmoarcArc *arc,
                                    const char *emotion,
                                    bool smoothed,
                                    double *values,
                                    size_t len);

/**
 * Renders the arc as CSV. The string must be released with
 * [`emoarc_string_free`].
 *
 * # Safety
 * `arc` must be live; `out` must be writable.
 */
enum EmoarcStatus emoarc_arc_to_csv(const struct EmoarcArc *arc, char **out);

/**
 * # Safety
 * `arc` must be NULL or a handle not yet freed.
 */
void emoarc_arc_free(struct EmoarcArc *arc);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void emoarc_string_free(char *s);

/**
 * Cosine similarity of two `len`-dimensional vectors.
 *
 * # Safety
 * `u` and `v` must each hold `len` floats; `out` must be writable.
 */
enum EmoarcStatus emoarc_cosine(const float *u, const float *v, size_t len, double *out);

/**
 * Two-sided permutation test for the per-10k difference in one emotion
 * between documents `a` and `b`. Either output pointer may be NULL.
 *
 * # Safety
 * Handles must be live; `emotion` must be NUL-terminated.
 */
enum EmoarcStatus emoarc_permutation_test(const struct EmoarcLexicon *lex,
                                          const struct EmoarcSequence *a,
                                          const struct EmoarcSequence *b,
                                          const char *emotion,
                                          size_t n_permutations,
                                          uint64_t seed,
                                          double *observed_diff,
                                          double *p_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EMOARC_H */
