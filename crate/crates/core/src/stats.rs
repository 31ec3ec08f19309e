//! Token-level permutation test for differences in per-10k emotion scores.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arcs::{Scorer, PER_WORDS};
use crate::emotion::Emotion;
use crate::exact::ExactSum;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::textproc::LemmaSequence;

/// Relative slack when comparing permuted and observed differences, so a
/// permutation reproducing the observed split is not lost to rounding.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    pub emotion: Emotion,
    /// Per-10k score of A minus that of B.
    pub observed_diff: f64,
    /// `(1 + extreme) / (1 + n_permutations)`
    pub p_value: f64,
    pub n_permutations: usize,
    pub seed: u64,
}

/// Per-word intensities for one emotion.
pub fn word_intensities(seq: &LemmaSequence, scorer: &Scorer<'_>, col: usize) -> Vec<f64> {
    seq.words().map(|t| scorer.intensity(&t.lemma, col)).collect()
}

/// Per-10k score of `a` minus that of `b`, computed exactly as document
/// scores are so that the observed difference matches the score table.
pub fn score_difference(a: &[f64], b: &[f64]) -> f64 {
    let per_10k = |xs: &[f64]| PER_WORDS * xs.iter().copied().collect::<ExactSum>().value() / xs.len() as f64;
    per_10k(a) - per_10k(b)
}

pub fn at_least_as_extreme(diff: f64, observed: f64) -> bool {
    diff.abs() >= observed.abs() - TIE_TOLERANCE * observed.abs().max(1.0)
}

/// Pools the word tokens of both documents and repeatedly reassigns them at
/// random to groups of the original sizes. Permutation `i` draws from ChaCha8
/// stream `i` of `seed`, so results do not depend on thread scheduling.
pub fn permutation_test(
    a: &LemmaSequence,
    b: &LemmaSequence,
    lex: &Lexicon,
    emotion: Emotion,
    n_permutations: usize,
    seed: u64,
) -> Result<SignificanceResult> {
    if n_permutations == 0 {
        return Err(Error::Config("n_permutations must be at least 1".into()));
    }
    let col = lex
        .emotions()
        .index_of(emotion)
        .ok_or_else(|| Error::Config(format!("emotion `{emotion}` is not in the active set")))?;
    let scorer = Scorer::new(lex);
    let xa = word_intensities(a, &scorer, col);
    let xb = word_intensities(b, &scorer, col);
    for (seq, xs) in [(a, &xa), (b, &xb)] {
        if xs.is_empty() {
            return Err(Error::EmptyDocument(seq.doc_id.clone()));
        }
    }
    let observed_diff = score_difference(&xa, &xb);
    let na = xa.len();
    let pooled: Vec<f64> = xa.iter().chain(&xb).copied().collect();

    let extreme = (0..n_permutations)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut work = pooled.clone();
            for k in 0..na {
                let j = rng.random_range(k..work.len());
                work.swap(k, j);
            }
            let (ga, gb) = work.split_at(na);
            at_least_as_extreme(score_difference(ga, gb), observed_diff)
        })
        .count();

    Ok(SignificanceResult {
        emotion,
        observed_diff,
        p_value: (1 + extreme) as f64 / (1 + n_permutations) as f64,
        n_permutations,
        seed,
    })
}
