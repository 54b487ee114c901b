//! Sentences as bags of word vectors, and most-similar-sentence retrieval.

use rayon::prelude::*;

use crate::bundle::{cosine_from_parts, BundleAccumulator, BundleVector};
use crate::error::{Error, Result};
use crate::textpipe::{PipelineConfig, Token, Vocabulary};

/// Words whose trailing period does not end a sentence.
const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "st", "jr", "sr", "prof", "rev", "capt", "col", "gen", "lt", "messrs",
    "vs",
];

/// Characters allowed between a terminator and the following whitespace.
const CLOSERS: &[char] = &['"', '\'', ')', ']', '\u{201d}', '\u{2019}'];

fn ends_with_abbreviation(sentence: &str) -> bool {
    let trimmed = sentence.trim_end_matches(|c: char| c == '.' || CLOSERS.contains(&c));
    let last = trimmed.rsplit(char::is_whitespace).next().unwrap_or("");
    let word: String = last
        .chars()
        .filter(|c| c.is_alphanumeric())
        .collect::<String>()
        .to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

/// Splits on `.`, `!` or `?` followed by whitespace or end of text, and on
/// blank lines. Internal whitespace of each sentence is collapsed.
pub fn split_sentences(text: &str) -> Vec<String> {
    fn flush(current: &mut String, out: &mut Vec<String>) {
        let collapsed = current.split_whitespace().collect::<Vec<_>>().join(" ");
        if !collapsed.is_empty() {
            out.push(collapsed);
        }
        current.clear();
    }

    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut current = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        if c == '\n' {
            let mut j = i;
            while j < chars.len() && chars[j] != '\n' && chars[j].is_whitespace() {
                j += 1;
            }
            if j < chars.len() && chars[j] == '\n' {
                flush(&mut current, &mut out);
                i = j + 1;
            } else {
                current.push(' ');
            }
            continue;
        }
        current.push(c);
        if matches!(c, '.' | '!' | '?') {
            while i < chars.len() && (matches!(chars[i], '.' | '!' | '?') || CLOSERS.contains(&chars[i])) {
                current.push(chars[i]);
                i += 1;
            }
            let at_boundary = i == chars.len() || chars[i].is_whitespace();
            if at_boundary && !(c == '.' && ends_with_abbreviation(&current)) {
                flush(&mut current, &mut out);
            }
        }
    }
    flush(&mut current, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct SentenceConfig {
    pub pipeline: PipelineConfig,
    pub dim: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SentenceRecord {
    pub raw_text: String,
    pub tokens: Vec<Token>,
    pub vector: BundleVector,
}

#[derive(Debug, Clone)]
pub struct SentenceIndex {
    vocabulary: Vocabulary,
    pipeline: PipelineConfig,
    sentences: Vec<SentenceRecord>,
    norms: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceHit {
    pub rank: usize,
    pub sentence_index: usize,
    pub score: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryOutcome {
    pub hits: Vec<SentenceHit>,
    /// Query tokens that took part in the search.
    pub used_tokens: Vec<String>,
    /// Query tokens dropped as out of vocabulary.
    pub dropped_tokens: usize,
}

pub fn build_sentence_index(text: &str, config: &SentenceConfig) -> Result<SentenceIndex> {
    SentenceIndex::from_sentences(split_sentences(text), config)
}

impl SentenceIndex {
    /// Indexes pre-split sentences; sentences with no tokens left after the
    /// pipeline are skipped.
    pub fn from_sentences<S: Into<String>>(
        sentences: impl IntoIterator<Item = S>,
        config: &SentenceConfig,
    ) -> Result<Self> {
        let processed: Vec<(String, Vec<Token>)> = sentences
            .into_iter()
            .map(Into::into)
            .map(|raw| {
                let tokens = config.pipeline.process(&raw);
                (raw, tokens)
            })
            .filter(|(_, tokens)| !tokens.is_empty())
            .collect();

        let mut vocabulary = Vocabulary::from_words(
            processed.iter().flat_map(|(_, t)| t.iter().map(|t| t.text.as_str())),
            config.dim,
            config.seed,
        )?;
        vocabulary.tag_pipeline(&config.pipeline);
        let vectors = vocabulary.materialize();

        let sentences = processed
            .into_par_iter()
            .map(|(raw_text, tokens)| {
                let mut acc = BundleAccumulator::new(config.dim)?;
                for t in &tokens {
                    let i = vocabulary.index_of(&t.text).expect("built from these tokens");
                    acc.add(&vectors[i])?;
                }
                Ok(SentenceRecord {
                    raw_text,
                    tokens,
                    vector: acc.finish(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let norms = sentences.iter().map(|s| s.vector.norm_squared()).collect();
        Ok(Self {
            vocabulary,
            pipeline: config.pipeline.clone(),
            sentences,
            norms,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn sentences(&self) -> &[SentenceRecord] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Bundle of the in-vocabulary query tokens, plus the tokens used and the
    /// number dropped.
    pub fn query_vector(&self, query: &str) -> Result<(BundleVector, Vec<String>, usize)> {
        let tokens = self.pipeline.process(query);
        let mut acc = BundleAccumulator::new(self.vocabulary.dim())?;
        let mut used = Vec::new();
        let mut dropped = 0;
        for t in tokens {
            match self.vocabulary.vector_of(&t.text) {
                Some(v) => {
                    acc.add(&v)?;
                    used.push(t.text);
                }
                None => dropped += 1,
            }
        }
        if used.is_empty() {
            return Err(Error::NoQueryTokens);
        }
        Ok((acc.finish(), used, dropped))
    }

    /// Scores of every indexed sentence against `query`: cosine when
    /// `normalize`, otherwise the dot product scaled by `1/d`.
    pub fn score_all(&self, query: &BundleVector, normalize: bool) -> Result<Vec<f64>> {
        let query_norm = query.norm_squared();
        let dim = self.vocabulary.dim() as f64;
        self.sentences
            .par_iter()
            .zip(&self.norms)
            .map(|(s, &norm)| {
                let dot = query.dot(&s.vector)?;
                Ok(if normalize {
                    cosine_from_parts(dot, query_norm, norm).ok_or(Error::ZeroVector)?
                } else {
                    dot as f64 / dim
                })
            })
            .collect()
    }

    pub fn query(&self, query: &str, top_n: usize, normalize: bool) -> Result<QueryOutcome> {
        if self.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let (zeta, used_tokens, dropped_tokens) = self.query_vector(query)?;
        let scores = self.score_all(&zeta, normalize)?;
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        let hits = order
            .into_iter()
            .take(top_n)
            .enumerate()
            .map(|(rank, i)| SentenceHit {
                rank: rank + 1,
                sentence_index: i,
                score: scores[i],
                text: self.sentences[i].raw_text.clone(),
            })
            .collect();
        Ok(QueryOutcome {
            hits,
            used_tokens,
            dropped_tokens,
        })
    }
}

pub fn query_sentences(
    index: &SentenceIndex,
    query: &str,
    top_n: usize,
    normalize: bool,
) -> Result<QueryOutcome> {
    index.query(query, top_n, normalize)
}
