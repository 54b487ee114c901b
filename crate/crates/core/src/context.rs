//! Word-context vectors from sliding windows.
//!
//! The context vector of a word is the bundle of the vectors of every word
//! seen within `L` positions of any of its occurrences. Windows are clipped at
//! the ends of the token stream and never include the centre position itself.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::{cosine_from_parts, BundleVector};
use crate::error::{Error, Result};
use crate::membership::MembershipScore;
use crate::textpipe::{Token, Vocabulary};
use crate::textpipe::VocabularyDocument;

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Half window length used when none is given (a 10-word window).
pub const DEFAULT_WINDOW_HALF_LENGTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordContextStats {
    pub word_index: usize,
    pub occurrences: u64,
    /// Context tokens accumulated, with multiplicity.
    pub total: u64,
    /// Distinct context words.
    pub distinct: u64,
}

#[derive(Debug, Clone)]
pub struct ContextModel {
    vocabulary: Vocabulary,
    window_half_length: usize,
    contexts: Vec<BundleVector>,
    occurrences: Vec<u64>,
    distinct: Vec<u64>,
    norms: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    format_version: u32,
    vocabulary: VocabularyDocument,
    window_half_length: usize,
    occurrences: Vec<u64>,
    distinct: Vec<u64>,
    counts: Vec<u64>,
    components: Vec<Vec<i32>>,
}

/// Co-occurrence counts `theta` per centre word, keyed by context word index.
fn cooccurrences(indices: &[usize], n_words: usize, half: usize) -> Vec<BTreeMap<usize, u32>> {
    let mut counts = vec![BTreeMap::new(); n_words];
    for (pos, &center) in indices.iter().enumerate() {
        let lo = pos.saturating_sub(half);
        let hi = (pos + half).min(indices.len() - 1);
        for (other, &ctx) in indices.iter().enumerate().take(hi + 1).skip(lo) {
            if other != pos {
                *counts[center].entry(ctx).or_insert(0) += 1;
            }
        }
    }
    counts
}

pub fn build_context_model(
    tokens: &[Token],
    vocabulary: &Vocabulary,
    window_half_length: usize,
) -> Result<ContextModel> {
    if window_half_length == 0 {
        return Err(Error::InvalidArgument("window half length must be positive".into()));
    }
    let indices = tokens
        .iter()
        .map(|t| {
            vocabulary
                .index_of(&t.text)
                .ok_or_else(|| Error::UnknownWord(t.text.clone()))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = vocabulary.len();
    let mut occurrences = vec![0u64; n];
    for &i in &indices {
        occurrences[i] += 1;
    }
    let counts = cooccurrences(&indices, n, window_half_length);
    let vectors = vocabulary.materialize();
    let dim = vocabulary.dim();

    let contexts = counts
        .par_iter()
        .map(|row| {
            let mut bundle = BundleVector::new(dim)?;
            for (&ctx, &theta) in row {
                bundle.add_weighted(&vectors[ctx], theta)?;
            }
            Ok(bundle)
        })
        .collect::<Result<Vec<_>>>()?;
    let distinct = counts.iter().map(|row| row.len() as u64).collect();

    Ok(ContextModel::assemble(
        vocabulary.clone(),
        window_half_length,
        contexts,
        occurrences,
        distinct,
    ))
}

impl ContextModel {
    fn assemble(
        vocabulary: Vocabulary,
        window_half_length: usize,
        contexts: Vec<BundleVector>,
        occurrences: Vec<u64>,
        distinct: Vec<u64>,
    ) -> Self {
        let norms = contexts.iter().map(BundleVector::norm_squared).collect();
        Self {
            vocabulary,
            window_half_length,
            contexts,
            occurrences,
            distinct,
            norms,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn window_half_length(&self) -> usize {
        self.window_half_length
    }

    fn index(&self, word: &str) -> Result<usize> {
        self.vocabulary
            .index_of(word)
            .ok_or_else(|| Error::UnknownWord(word.to_string()))
    }

    /// Index of `word`, which must have a non-zero context vector.
    fn nonempty_index(&self, word: &str) -> Result<usize> {
        let i = self.index(word)?;
        if self.norms[i] == 0 {
            return Err(Error::EmptyContext(word.to_string()));
        }
        Ok(i)
    }

    pub fn context(&self, word: &str) -> Result<&BundleVector> {
        Ok(&self.contexts[self.index(word)?])
    }

    pub fn contexts(&self) -> &[BundleVector] {
        &self.contexts
    }

    pub fn stats(&self, word_index: usize) -> WordContextStats {
        WordContextStats {
            word_index,
            occurrences: self.occurrences[word_index],
            total: self.contexts[word_index].count(),
            distinct: self.distinct[word_index],
        }
    }

    /// Per-word statistics, largest total context first (ties by index).
    pub fn stats_by_total(&self) -> Vec<WordContextStats> {
        let mut all: Vec<_> = (0..self.vocabulary.len()).map(|i| self.stats(i)).collect();
        all.sort_by(|a, b| b.total.cmp(&a.total).then(a.word_index.cmp(&b.word_index)));
        all
    }

    /// Number of words whose total context count exceeds `threshold`.
    pub fn count_above(&self, threshold: u64) -> usize {
        self.contexts.iter().filter(|c| c.count() > threshold).count()
    }

    /// Score of `probe` against the context of `center`; its expectation is
    /// the number of times `probe` occurred in `center`'s windows.
    pub fn context_contains(&self, center: &str, probe: &str) -> Result<MembershipScore> {
        let c = self.index(center)?;
        let p = self.index(probe)?;
        self.contexts[c].membership_score(&self.vocabulary.vector(p))
    }

    /// Cosine between two context vectors.
    pub fn context_similarity(&self, w1: &str, w2: &str) -> Result<f64> {
        let a = self.nonempty_index(w1)?;
        let b = self.nonempty_index(w2)?;
        let dot = self.contexts[a].dot(&self.contexts[b])?;
        Ok(cosine_from_parts(dot, self.norms[a], self.norms[b]).expect("norms are non-zero"))
    }

    pub fn similar_words(&self, word: &str, top_n: usize) -> Result<Vec<(String, f64)>> {
        let i = self.nonempty_index(word)?;
        let target: Vec<i64> = self.contexts[i].components().iter().map(|&c| c.into()).collect();
        self.rank_against(&target, &HashSet::from([i]), top_n)
    }

    /// Ranks non-operand words by cosine against
    /// `sum(context(plus)) - sum(context(minus))`.
    pub fn context_arithmetic(
        &self,
        plus: &[&str],
        minus: &[&str],
        top_n: usize,
    ) -> Result<Vec<(String, f64)>> {
        let mut target = vec![0i64; self.vocabulary.dim()];
        let mut operands = HashSet::new();
        for (words, sign) in [(plus, 1i64), (minus, -1i64)] {
            for w in words {
                let i = self.nonempty_index(w)?;
                operands.insert(i);
                for (t, &c) in target.iter_mut().zip(self.contexts[i].components()) {
                    *t += sign * i64::from(c);
                }
            }
        }
        self.rank_against(&target, &operands, top_n)
    }

    fn rank_against(
        &self,
        target: &[i64],
        exclude: &HashSet<usize>,
        top_n: usize,
    ) -> Result<Vec<(String, f64)>> {
        let target_norm: i64 = target.iter().map(|t| t * t).sum();
        if target_norm == 0 {
            return Err(Error::ZeroVector);
        }
        if top_n == 0 {
            return Ok(Vec::new());
        }
        let mut scored: Vec<(usize, f64)> = (0..self.contexts.len())
            .into_par_iter()
            .filter(|i| !exclude.contains(i) && self.norms[*i] != 0)
            .map(|i| {
                let dot: i64 = target
                    .iter()
                    .zip(self.contexts[i].components())
                    .map(|(&t, &c)| t * i64::from(c))
                    .sum();
                let score = cosine_from_parts(dot, target_norm, self.norms[i]).expect("non-zero");
                (i, score)
            })
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        scored.truncate(top_n);
        Ok(scored
            .into_iter()
            .map(|(i, s)| (self.vocabulary.words()[i].clone(), s))
            .collect())
    }

    pub fn to_json(&self) -> String {
        let doc = ModelDocument {
            format_version: MODEL_FORMAT_VERSION,
            vocabulary: self.vocabulary.to_document(),
            window_half_length: self.window_half_length,
            occurrences: self.occurrences.clone(),
            distinct: self.distinct.clone(),
            counts: self.contexts.iter().map(BundleVector::count).collect(),
            components: self.contexts.iter().map(|c| c.components().to_vec()).collect(),
        };
        serde_json::to_string(&doc).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if doc.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported model format version {}",
                doc.format_version
            )));
        }
        let vocabulary = Vocabulary::from_document(doc.vocabulary)?;
        let n = vocabulary.len();
        if [doc.occurrences.len(), doc.distinct.len(), doc.counts.len(), doc.components.len()]
            .iter()
            .any(|&len| len != n)
        {
            return Err(Error::Format("model arrays disagree with vocabulary size".into()));
        }
        let contexts = doc
            .components
            .into_iter()
            .zip(doc.counts)
            .map(|(components, count)| {
                if components.len() != vocabulary.dim() {
                    return Err(Error::Format("context vector has wrong dimension".into()));
                }
                BundleVector::from_parts(components, count)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(
            vocabulary,
            doc.window_half_length,
            contexts,
            doc.occurrences,
            doc.distinct,
        ))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
