//! Nearest-neighbour message classification and k-fold evaluation.
//!
//! Each training message is stored as the bundle of its word vectors. A new
//! message takes the label of the most cosine-similar stored message; there is
//! no training step beyond summing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::bundle::{cosine_from_parts, BundleAccumulator, BundleVector};
use crate::error::{Error, Result};
use crate::textpipe::{PipelineConfig, Token, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Legitimate = 0,
    Spam = 1,
}

impl Label {
    /// Ling-Spam convention: spam files are named `spmsg*`.
    pub fn from_filename(name: &str) -> Self {
        if name.starts_with("spmsg") {
            Label::Spam
        } else {
            Label::Legitimate
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub message_id: String,
    pub tokens: Vec<Token>,
    pub label: Label,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledCorpus {
    pub partitions: Vec<Vec<Message>>,
}

impl LabeledCorpus {
    pub fn message_count(&self) -> usize {
        self.partitions.iter().map(Vec::len).sum()
    }
}

fn partition_number(name: &str) -> Option<usize> {
    name.strip_prefix("part")?.parse().ok()
}

/// Drops a leading `Subject:` label, keeping the subject text.
fn message_text(raw: &str) -> &str {
    raw.strip_prefix("Subject:").unwrap_or(raw)
}

/// Reads a Ling-Spam style directory: `part1 .. partN` subdirectories of
/// `*.txt` messages, labelled by file name.
pub fn ingest_lingspam(root: &Path, pipeline: &PipelineConfig) -> Result<LabeledCorpus> {
    let entries = std::fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut parts: Vec<(usize, PathBuf)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        let path = entry.path();
        if let Some(n) = path.file_name().and_then(|n| n.to_str()).and_then(partition_number) {
            if path.is_dir() {
                parts.push((n, path));
            }
        }
    }
    parts.sort();
    if parts.is_empty() {
        return Err(Error::CorpusLayout(format!(
            "no part<N> directories under {}",
            root.display()
        )));
    }
    for (expected, (n, _)) in (1..).zip(&parts) {
        if *n != expected {
            return Err(Error::CorpusLayout(format!(
                "missing partition directory part{expected} under {}",
                root.display()
            )));
        }
    }

    let mut partitions = Vec::with_capacity(parts.len());
    for (n, dir) in &parts {
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .map(|e| e.map(|e| e.path()).map_err(|err| Error::io(dir, err)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();
        let messages = files
            .par_iter()
            .map(|path| {
                let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
                let raw = String::from_utf8_lossy(&bytes);
                let name = path.file_name().and_then(|f| f.to_str()).unwrap_or_default();
                Ok(Message {
                    message_id: format!("part{n}/{name}"),
                    tokens: pipeline.process(message_text(&raw)),
                    label: Label::from_filename(name),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        partitions.push(messages);
    }
    Ok(LabeledCorpus { partitions })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exemplar {
    pub message_id: String,
    pub vector: BundleVector,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub label: Label,
    pub best_match: usize,
    pub best_match_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainedFilter {
    vocabulary: Vocabulary,
    exemplars: Vec<Exemplar>,
    norms: Vec<i64>,
}

/// Builds a vocabulary over `messages` and one exemplar per non-empty message.
pub fn train_filter<'a>(
    messages: impl IntoIterator<Item = &'a Message> + Clone,
    dim: usize,
    seed: u64,
) -> Result<TrainedFilter> {
    let vocabulary = Vocabulary::from_words(
        messages
            .clone()
            .into_iter()
            .flat_map(|m| m.tokens.iter().map(|t| t.text.as_str())),
        dim,
        seed,
    )?;
    TrainedFilter::with_vocabulary(messages, vocabulary)
}

impl TrainedFilter {
    /// Trains against an existing vocabulary, which must cover every training
    /// token.
    pub fn with_vocabulary<'a>(
        messages: impl IntoIterator<Item = &'a Message>,
        vocabulary: Vocabulary,
    ) -> Result<Self> {
        let messages: Vec<&Message> = messages.into_iter().filter(|m| !m.tokens.is_empty()).collect();
        for label in [Label::Spam, Label::Legitimate] {
            if !messages.iter().any(|m| m.label == label) {
                return Err(Error::EmptyClass(label as u8));
            }
        }
        let vectors = vocabulary.materialize();
        let exemplars = messages
            .par_iter()
            .map(|m| {
                let mut acc = BundleAccumulator::new(vocabulary.dim())?;
                for t in &m.tokens {
                    let i = vocabulary
                        .index_of(&t.text)
                        .ok_or_else(|| Error::UnknownWord(t.text.clone()))?;
                    acc.add(&vectors[i])?;
                }
                Ok(Exemplar {
                    message_id: m.message_id.clone(),
                    vector: acc.finish(),
                    label: m.label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_exemplars(vocabulary, exemplars))
    }

    pub fn from_exemplars(vocabulary: Vocabulary, exemplars: Vec<Exemplar>) -> Self {
        let norms = exemplars.iter().map(|e| e.vector.norm_squared()).collect();
        Self {
            vocabulary,
            exemplars,
            norms,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn exemplars(&self) -> &[Exemplar] {
        &self.exemplars
    }

    /// Bundle of the known tokens of a message; `None` if it has none.
    pub fn message_vector(&self, tokens: &[Token]) -> Option<BundleVector> {
        let mut acc = BundleAccumulator::new(self.vocabulary.dim()).ok()?;
        for v in tokens.iter().filter_map(|t| self.vocabulary.vector_of(&t.text)) {
            acc.add(&v).ok()?;
        }
        (acc.count() > 0).then(|| acc.finish())
    }

    /// 1-nearest-neighbour by cosine; ties go to the lowest exemplar index.
    /// Returns `None` when no token of the message is known.
    pub fn classify(&self, tokens: &[Token]) -> Option<Classification> {
        let query = self.message_vector(tokens)?;
        let query_norm = query.norm_squared();
        let mut best: Option<(usize, f64)> = None;
        for (i, (e, &norm)) in self.exemplars.iter().zip(&self.norms).enumerate() {
            let dot = query.dot(&e.vector).expect("dimensions agree");
            let Some(score) = cosine_from_parts(dot, query_norm, norm) else {
                continue;
            };
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
        let (i, score) = best?;
        Some(Classification {
            label: self.exemplars[i].label,
            best_match: i,
            best_match_id: self.exemplars[i].message_id.clone(),
            score,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VocabularyMode {
    /// Vocabulary from the training parts of each fold only.
    PerFold,
    /// One vocabulary over the whole corpus, test parts included.
    Global,
}

impl FromStr for VocabularyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-fold" => Ok(VocabularyMode::PerFold),
            "global" => Ok(VocabularyMode::Global),
            other => Err(Error::InvalidArgument(format!("unknown vocabulary mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossValidationConfig {
    pub dim: usize,
    pub seed: u64,
    pub vocabulary_mode: VocabularyMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    /// 1-based partition number used for testing.
    pub fold: usize,
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
    /// Test messages with no known token; counted as legitimate.
    pub unclassifiable: u64,
    pub spam_precision: Option<f64>,
    pub spam_recall: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub dim: usize,
    pub seed: u64,
    pub folds: Vec<FoldResult>,
    pub mean_precision: Option<f64>,
    pub mean_recall: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let defined: Vec<f64> = values.flatten().collect();
    (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
}

fn fmt_metric(value: Option<f64>) -> String {
    value.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"))
}

impl EvaluationReport {
    pub const CSV_HEADER: &'static str = "fold,dim,seed,tp,fp,fn,tn,spam_precision,spam_recall";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for f in &self.folds {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                f.fold,
                self.dim,
                self.seed,
                f.tp,
                f.fp,
                f.fn_,
                f.tn,
                fmt_metric(f.spam_precision),
                fmt_metric(f.spam_recall)
            );
        }
        let _ = writeln!(
            out,
            "average,{},{},,,,,{},{}",
            self.dim,
            self.seed,
            fmt_metric(self.mean_precision),
            fmt_metric(self.mean_recall)
        );
        out
    }
}

/// Filter for fold `fold` (0-based): trained on every other partition.
pub fn train_fold(
    corpus: &LabeledCorpus,
    fold: usize,
    config: &CrossValidationConfig,
) -> Result<TrainedFilter> {
    let training = || {
        corpus
            .partitions
            .iter()
            .enumerate()
            .filter(move |(p, _)| *p != fold)
            .flat_map(|(_, msgs)| msgs.iter())
    };
    match config.vocabulary_mode {
        VocabularyMode::PerFold => train_filter(training(), config.dim, config.seed),
        VocabularyMode::Global => {
            let vocabulary = Vocabulary::from_words(
                corpus
                    .partitions
                    .iter()
                    .flatten()
                    .flat_map(|m| m.tokens.iter().map(|t| t.text.as_str())),
                config.dim,
                config.seed,
            )?;
            TrainedFilter::with_vocabulary(training(), vocabulary)
        }
    }
}

pub fn evaluate_fold(filter: &TrainedFilter, test: &[Message], fold: usize) -> FoldResult {
    let predictions: Vec<Option<Label>> = test
        .par_iter()
        .map(|m| filter.classify(&m.tokens).map(|c| c.label))
        .collect();
    let mut r = FoldResult {
        fold,
        tp: 0,
        fp: 0,
        fn_: 0,
        tn: 0,
        unclassifiable: 0,
        spam_precision: None,
        spam_recall: None,
    };
    for (m, predicted) in test.iter().zip(predictions) {
        if predicted.is_none() {
            r.unclassifiable += 1;
        }
        match (m.label, predicted.unwrap_or(Label::Legitimate)) {
            (Label::Spam, Label::Spam) => r.tp += 1,
            (Label::Spam, Label::Legitimate) => r.fn_ += 1,
            (Label::Legitimate, Label::Spam) => r.fp += 1,
            (Label::Legitimate, Label::Legitimate) => r.tn += 1,
        }
    }
    r.spam_precision = ratio(r.tp, r.tp + r.fp);
    r.spam_recall = ratio(r.tp, r.tp + r.fn_);
    r
}

/// Leave-one-partition-out evaluation over every partition.
pub fn cross_validate(
    corpus: &LabeledCorpus,
    config: &CrossValidationConfig,
) -> Result<EvaluationReport> {
    if corpus.partitions.len() < 2 {
        return Err(Error::CorpusLayout(
            "cross-validation needs at least two partitions".into(),
        ));
    }
    let mut folds = Vec::with_capacity(corpus.partitions.len());
    for (f, test) in corpus.partitions.iter().enumerate() {
        let filter = train_fold(corpus, f, config)?;
        folds.push(evaluate_fold(&filter, test, f + 1));
    }
    Ok(EvaluationReport {
        dim: config.dim,
        seed: config.seed,
        mean_precision: mean(folds.iter().map(|f| f.spam_precision)),
        mean_recall: mean(folds.iter().map(|f| f.spam_recall)),
        folds,
    })
}
