use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use hdv_core::context::{build_context_model, ContextModel};
use hdv_core::experiments::{membership_trials, rho_curve, summarize};
use hdv_core::sentence::{build_sentence_index, SentenceConfig};
use hdv_core::spam::{cross_validate, ingest_lingspam, CrossValidationConfig, VocabularyMode};
use hdv_core::textpipe::{build_vocabulary, Lemmatizer, PipelineConfig, StopWords};

use crate::args::{
    Command, ContextArithArgs, ContextBuildArgs, ContextCommand, ContextSimilarArgs, ContextStatsArgs,
    LemmatizerArg, MembershipSimArgs, PipelineArgs, RhoCurveArgs, SentenceQueryArgs, SpamEvalArgs,
    VocabModeArg,
};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::MembershipSim(a) => membership_sim(a),
        Command::RhoCurve(a) => rho(a),
        Command::Context { command } => match command {
            ContextCommand::Build(a) => context_build(a),
            ContextCommand::Similar(a) => context_similar(a),
            ContextCommand::Arith(a) => context_arith(a),
            ContextCommand::Stats(a) => context_stats(a),
        },
        Command::SentenceQuery(a) => sentence_query(a),
        Command::SpamEval(a) => spam_eval(a),
    }
}

fn io_error(path: Option<&Path>, e: io::Error) -> CliError {
    match path {
        Some(p) => CliError::Io(format!("{}: {e}", p.display())),
        None => CliError::Io(format!("stdout: {e}")),
    }
}

/// CSV sink: a file when `--out` is given, stdout otherwise.
struct Output {
    path: Option<PathBuf>,
    writer: csv::Writer<Box<dyn Write>>,
}

impl Output {
    fn open(path: Option<&Path>) -> Result<Self> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_error(Some(p), e))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Self {
            path: path.map(Path::to_path_buf),
            writer: csv::WriterBuilder::new().flexible(true).from_writer(sink),
        })
    }

    fn record<I, F>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[u8]>,
    {
        let path = self.path.clone();
        self.writer.write_record(fields).map_err(|e| csv_error(path.as_deref(), e))
    }

    fn finish(mut self) -> Result<()> {
        self.writer.flush().map_err(|e| io_error(self.path.as_deref(), e))
    }
}

fn csv_error(path: Option<&Path>, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => io_error(path, e),
        other => CliError::Data(format!("{other:?}")),
    }
}

fn num(v: f64) -> String {
    format!("{v:.6}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |v| format!("{v:.6}"))
}

fn require_positive(name: &str, value: usize) -> Result<()> {
    if value == 0 {
        Err(CliError::Data(format!("--{name} must be positive")))
    } else {
        Ok(())
    }
}

fn membership_sim(a: MembershipSimArgs) -> Result<()> {
    require_positive("trials", a.trials)?;
    let trials = membership_trials(a.dim, a.k, a.trials, a.seed)?;
    let mut out = Output::open(a.out.as_deref())?;
    out.record(["trial", "member_score", "nonmember_score"])?;
    for (t, s) in trials.iter().enumerate() {
        out.record([t.to_string(), num(s.member), num(s.nonmember)])?;
    }
    let members: Vec<f64> = trials.iter().map(|t| t.member).collect();
    let others: Vec<f64> = trials.iter().map(|t| t.nonmember).collect();
    let (m, o) = (summarize(&members), summarize(&others));
    out.record(["mean".into(), num(m.mean), num(o.mean)])?;
    out.record(["std".into(), num(m.std), num(o.std)])?;
    out.finish()
}

fn rho(a: RhoCurveArgs) -> Result<()> {
    require_positive("trials", a.trials)?;
    let k_max = a.k_max.unwrap_or(a.dim);
    let points = rho_curve(a.dim, a.k_min, k_max, a.trials, a.seed, a.threshold)?;
    let mut out = Output::open(a.out.as_deref())?;
    out.record(["k", "sigma", "rho_analytic", "precision_emp", "recall_emp"])?;
    for p in points {
        out.record([
            p.k.to_string(),
            num(p.sigma),
            num(p.rho_analytic),
            fmt_opt(p.precision_emp),
            fmt_opt(p.recall_emp),
        ])?;
    }
    out.finish()
}

fn pipeline(args: &PipelineArgs, default: PipelineConfig) -> Result<PipelineConfig> {
    let mut config = default;
    if let Some(sw) = &args.stopwords {
        config.stopwords = match sw.as_str() {
            "builtin" => StopWords::builtin(),
            "none" => StopWords::none(),
            path => StopWords::load(Path::new(path))?,
        };
    }
    if let Some(l) = args.lemmatizer {
        config.lemmatizer = match l {
            LemmatizerArg::Identity => Lemmatizer::Identity,
            LemmatizerArg::Suffix => Lemmatizer::SuffixStrip,
        };
    }
    Ok(config)
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| io_error(Some(path), e))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

fn context_build(a: ContextBuildArgs) -> Result<()> {
    if a.window < 2 || !a.window.is_multiple_of(2) {
        return Err(CliError::Data("--window must be an even number >= 2".into()));
    }
    let config = pipeline(&a.pipeline, PipelineConfig::standard())?;
    let tokens = config.process(&read_text(&a.input)?);
    let mut vocab = build_vocabulary(&tokens, a.dim, a.seed)?;
    vocab.tag_pipeline(&config);
    let model = build_context_model(&tokens, &vocab, a.window / 2)?;
    model.save(&a.model)?;
    println!(
        "tokens: {}  vocabulary: {}  window: {}  dim: {}",
        tokens.len(),
        vocab.len(),
        a.window,
        a.dim
    );
    Ok(())
}

/// Normalises a query word the way the model's corpus was normalised.
fn model_word(model: &ContextModel, word: &str) -> String {
    let lower = word.to_lowercase();
    match model.vocabulary().lemmatizer().parse::<Lemmatizer>() {
        Ok(l) if model.vocabulary().index_of(&lower).is_none() => l.lemmatize(&lower),
        _ => lower,
    }
}

fn print_ranking(ranked: &[(String, f64)], out: Option<&Path>) -> Result<()> {
    for (i, (w, s)) in ranked.iter().enumerate() {
        println!("{}\t{w}\t{s:.6}", i + 1);
    }
    if let Some(path) = out {
        let mut csv = Output::open(Some(path))?;
        csv.record(["rank", "word", "score"])?;
        for (i, (w, s)) in ranked.iter().enumerate() {
            csv.record([(i + 1).to_string(), w.clone(), num(*s)])?;
        }
        csv.finish()?;
    }
    Ok(())
}

fn context_similar(a: ContextSimilarArgs) -> Result<()> {
    let model = ContextModel::load(&a.model)?;
    let ranked = model.similar_words(&model_word(&model, &a.word), a.top)?;
    print_ranking(&ranked, a.out.as_deref())
}

/// Splits `a + b - c` (or `a plus b minus c`) into plus and minus words.
pub fn parse_terms(terms: &[String]) -> Result<(Vec<String>, Vec<String>)> {
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    let mut negative = false;
    for term in terms {
        match term.as_str() {
            "+" | "plus" => negative = false,
            "-" | "minus" => negative = true,
            word => {
                if negative {
                    minus.push(word.to_string());
                } else {
                    plus.push(word.to_string());
                }
                negative = false;
            }
        }
    }
    if plus.is_empty() && minus.is_empty() {
        return Err(CliError::Usage("no words in expression".into()));
    }
    Ok((plus, minus))
}

fn context_arith(a: ContextArithArgs) -> Result<()> {
    let model = ContextModel::load(&a.model)?;
    let (plus, minus) = parse_terms(&a.terms)?;
    let plus: Vec<String> = plus.iter().map(|w| model_word(&model, w)).collect();
    let minus: Vec<String> = minus.iter().map(|w| model_word(&model, w)).collect();
    let plus: Vec<&str> = plus.iter().map(String::as_str).collect();
    let minus: Vec<&str> = minus.iter().map(String::as_str).collect();
    let ranked = model.context_arithmetic(&plus, &minus, a.top)?;
    print_ranking(&ranked, a.out.as_deref())
}

fn context_stats(a: ContextStatsArgs) -> Result<()> {
    let model = ContextModel::load(&a.model)?;
    let words = model.vocabulary().words();
    if let Some(path) = a.out.as_deref() {
        let mut csv = Output::open(Some(path))?;
        csv.record(["rank", "word", "occurrences", "total_context", "distinct_context"])?;
        for (rank, s) in model.stats_by_total().iter().enumerate() {
            csv.record([
                (rank + 1).to_string(),
                words[s.word_index].clone(),
                s.occurrences.to_string(),
                s.total.to_string(),
                s.distinct.to_string(),
            ])?;
        }
        csv.finish()?;
    }
    let above = model.count_above(a.threshold);
    let n = words.len();
    let pct = if n == 0 { 0.0 } else { 100.0 * above as f64 / n as f64 };
    println!("words with total context > {}: {above} of {n} ({pct:.2}%)", a.threshold);
    Ok(())
}

fn sentence_query(a: SentenceQueryArgs) -> Result<()> {
    let config = SentenceConfig {
        pipeline: pipeline(&a.pipeline, PipelineConfig::standard())?,
        dim: a.dim,
        seed: a.seed,
    };
    let index = build_sentence_index(&read_text(&a.input)?, &config)?;
    let outcome = index.query(&a.query, a.top, !a.no_normalize)?;
    println!("query words: {}", outcome.used_tokens.join(" "));
    if outcome.dropped_tokens > 0 {
        eprintln!("warning: {} out-of-vocabulary query words dropped", outcome.dropped_tokens);
    }
    for hit in &outcome.hits {
        println!("{}\t{:.6}\t{}", hit.rank, hit.score, hit.text);
    }
    if let Some(path) = a.out.as_deref() {
        let mut csv = Output::open(Some(path))?;
        csv.record(["rank", "score", "sentence_index", "text"])?;
        for hit in &outcome.hits {
            csv.record([
                hit.rank.to_string(),
                num(hit.score),
                hit.sentence_index.to_string(),
                hit.text.clone(),
            ])?;
        }
        csv.finish()?;
    }
    Ok(())
}

fn spam_eval(a: SpamEvalArgs) -> Result<()> {
    let corpus = ingest_lingspam(&a.corpus_dir, &pipeline(&a.pipeline, PipelineConfig::bare())?)?;
    let config = CrossValidationConfig {
        dim: a.dim,
        seed: a.seed,
        vocabulary_mode: match a.vocab_mode {
            VocabModeArg::PerFold => VocabularyMode::PerFold,
            VocabModeArg::Global => VocabularyMode::Global,
        },
    };
    let report = cross_validate(&corpus, &config)?;
    let table = report.to_csv();
    match a.out.as_deref() {
        Some(path) => std::fs::write(path, table).map_err(|e| io_error(Some(path), e))?,
        None => io::stdout().write_all(table.as_bytes()).map_err(|e| io_error(None, e))?,
    }
    eprintln!("messages: {}  partitions: {}", corpus.message_count(), corpus.partitions.len());
    for f in &report.folds {
        let flagged = if f.unclassifiable > 0 {
            format!("  ({} unclassifiable, counted legitimate)", f.unclassifiable)
        } else {
            String::new()
        };
        eprintln!(
            "fold {:>2}: precision {}  recall {}{flagged}",
            f.fold,
            fmt_opt(f.spam_precision),
            fmt_opt(f.spam_recall)
        );
    }
    eprintln!(
        "average: precision {}  recall {}  (d={}, seed={})",
        fmt_opt(report.mean_precision),
        fmt_opt(report.mean_recall),
        report.dim,
        report.seed
    );
    Ok(())
}
