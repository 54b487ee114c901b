//! Deterministic text preprocessing and the word -> hypervector association.

mod pipeline;
mod tokenize;
mod vocabulary;

pub use pipeline::{apply_pipeline, Lemmatizer, PipelineConfig, StopWords};
pub use tokenize::{tokenize, Token};
pub use vocabulary::{build_vocabulary, Vocabulary, VOCABULARY_FORMAT_VERSION};
pub(crate) use vocabulary::VocabularyDocument;
