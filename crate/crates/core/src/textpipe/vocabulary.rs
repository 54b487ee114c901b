use std::collections::HashMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pipeline::{PipelineConfig, StopWords};
use super::tokenize::Token;
use crate::error::{Error, Result};
use crate::hypervector::Hypervector;

pub const VOCABULARY_FORMAT_VERSION: u32 = 1;

/// Word list in first-appearance order. The vector of word `i` is
/// `Hypervector::generate(dim, seed, i)`; vectors are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    index: HashMap<String, usize>,
    dim: usize,
    seed: u64,
    lemmatizer: String,
    stopword_digest: String,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct VocabularyDocument {
    format_version: u32,
    dim: usize,
    seed: u64,
    lemmatizer: String,
    stopword_digest: String,
    words: Vec<String>,
}

pub fn build_vocabulary(tokens: &[Token], dim: usize, seed: u64) -> Result<Vocabulary> {
    Vocabulary::from_words(tokens.iter().map(|t| t.text.as_str()), dim, seed)
}

impl Vocabulary {
    pub fn from_words<'a>(
        words: impl IntoIterator<Item = &'a str>,
        dim: usize,
        seed: u64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut vocab = Self {
            words: Vec::new(),
            index: HashMap::new(),
            dim,
            seed,
            lemmatizer: "identity".into(),
            stopword_digest: StopWords::none().digest(),
        };
        for w in words {
            vocab.insert(w);
        }
        Ok(vocab)
    }

    /// Index of `word`, appending it if new.
    pub fn insert(&mut self, word: &str) -> usize {
        if let Some(&i) = self.index.get(word) {
            return i;
        }
        let i = self.words.len();
        self.words.push(word.to_string());
        self.index.insert(word.to_string(), i);
        i
    }

    /// Records which preprocessing produced the words.
    pub fn tag_pipeline(&mut self, config: &PipelineConfig) {
        self.lemmatizer = config.lemmatizer.name().to_string();
        self.stopword_digest = config.stopwords.digest();
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn lemmatizer(&self) -> &str {
        &self.lemmatizer
    }

    pub fn stopword_digest(&self) -> &str {
        &self.stopword_digest
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, index: usize) -> Option<&str> {
        self.words.get(index).map(String::as_str)
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn vector(&self, index: usize) -> Hypervector {
        Hypervector::generate(self.dim, self.seed, index as u64).expect("dim checked at construction")
    }

    pub fn vector_of(&self, word: &str) -> Option<Hypervector> {
        self.index_of(word).map(|i| self.vector(i))
    }

    /// All word vectors, in index order.
    pub fn materialize(&self) -> Vec<Hypervector> {
        (0..self.len()).into_par_iter().map(|i| self.vector(i)).collect()
    }

    pub(crate) fn to_document(&self) -> VocabularyDocument {
        VocabularyDocument {
            format_version: VOCABULARY_FORMAT_VERSION,
            dim: self.dim,
            seed: self.seed,
            lemmatizer: self.lemmatizer.clone(),
            stopword_digest: self.stopword_digest.clone(),
            words: self.words.clone(),
        }
    }

    pub(crate) fn from_document(doc: VocabularyDocument) -> Result<Self> {
        if doc.format_version != VOCABULARY_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported vocabulary format version {}",
                doc.format_version
            )));
        }
        let n = doc.words.len();
        let mut vocab = Self::from_words(doc.words.iter().map(String::as_str), doc.dim, doc.seed)?;
        if vocab.len() != n {
            return Err(Error::Format("vocabulary contains duplicate words".into()));
        }
        vocab.lemmatizer = doc.lemmatizer;
        vocab.stopword_digest = doc.stopword_digest;
        Ok(vocab)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("vocabulary serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textpipe::tokenize;

    #[test]
    fn first_appearance_order() {
        let v = build_vocabulary(&tokenize("a b a c", 1), 16, 1).unwrap();
        assert_eq!(v.words(), ["a", "b", "c"]);
        assert_eq!(
            (v.index_of("a"), v.index_of("b"), v.index_of("c")),
            (Some(0), Some(1), Some(2))
        );
        assert_eq!(v.index_of("d"), None);
        assert_eq!(v.vector_of("b").unwrap(), Hypervector::generate(16, 1, 1).unwrap());
    }

    #[test]
    fn rebuild_is_identical() {
        let tokens = tokenize("the quick brown fox jumps over the lazy dog", 1);
        let a = build_vocabulary(&tokens, 128, 9).unwrap();
        let b = build_vocabulary(&tokens, 128, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.materialize(), b.materialize());
        assert_eq!(a.len(), 8);
    }

    #[test]
    fn zero_dim_rejected() {
        assert!(build_vocabulary(&[], 0, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut v = build_vocabulary(&tokenize("x y z y", 1), 300, 77).unwrap();
        v.tag_pipeline(&PipelineConfig::standard());
        let back = Vocabulary::from_json(&v.to_json()).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.lemmatizer(), "suffix");
        assert_eq!(back.vector(2), v.vector(2));
    }

    #[test]
    fn rejects_bad_documents() {
        let v = build_vocabulary(&tokenize("x y", 1), 8, 1).unwrap();
        let bumped = v.to_json().replace("\"format_version\": 1", "\"format_version\": 99");
        assert!(Vocabulary::from_json(&bumped).is_err());
        let dup = v.to_json().replace("\"y\"", "\"x\"");
        assert!(Vocabulary::from_json(&dup).is_err());
        assert!(Vocabulary::from_json("{").is_err());
    }
}
