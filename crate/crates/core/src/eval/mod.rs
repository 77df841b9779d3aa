//! Corpus-level evaluation: decision counts and rates, part-of-speech and
//! word-frequency tables, score histograms, and side-by-side comparison of
//! classifier configurations.

mod emit;

pub use emit::{emit_comparison, emit_report, emit_reports, EmitError, OutputFormat};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{EmailDocument, Label};
use crate::lexicon::Lexicon;
use crate::rational::Rational;
use crate::scoring::{
    score_tokens, ClassifierConfig, ConfigError, Decision, EmailScore, WordScore,
};
use crate::text::{porter_stem, PennTag, TextPipeline, Token};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("corpus {0:?} has no documents")]
    EmptyCorpus(String),
    #[error("corpus {corpus:?} mixes labels: {first} and {other} (document {id})")]
    MixedLabels {
        corpus: String,
        first: Label,
        other: Label,
        id: String,
    },
    #[error("corpus {0:?} is unlabeled; evaluation needs phishing or legitimate documents")]
    Unlabeled(String),
    #[error("comparing needs at least two configurations, got {0}")]
    TooFewConfigs(usize),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// How documents are turned into tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Analyze the subject line as its own first sentence.
    pub include_subject: bool,
    /// Analyze and score emails on the rayon thread pool. Results are
    /// identical to a sequential run.
    pub parallel: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            include_subject: true,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzedEmail {
    pub id: String,
    pub tokens: Vec<Token>,
}

/// A single-label corpus after the text pipeline, ready to be scored under
/// any number of configurations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzedCorpus {
    pub name: String,
    pub label: Label,
    pub emails: Vec<AnalyzedEmail>,
    parallel: bool,
}

/// Tokenizes, tags and stems every document, keeping document order.
pub fn analyze_corpus(
    name: &str,
    documents: &[EmailDocument],
    pipeline: &TextPipeline,
    options: AnalysisOptions,
) -> Result<AnalyzedCorpus, EvalError> {
    let first = documents
        .first()
        .ok_or_else(|| EvalError::EmptyCorpus(name.to_string()))?;
    if let Some(other) = documents.iter().find(|d| d.label != first.label) {
        return Err(EvalError::MixedLabels {
            corpus: name.to_string(),
            first: first.label,
            other: other.label,
            id: other.id.clone(),
        });
    }
    if first.label == Label::Unknown {
        return Err(EvalError::Unlabeled(name.to_string()));
    }
    let analyze = |doc: &EmailDocument| AnalyzedEmail {
        id: doc.id.clone(),
        tokens: pipeline.analyze(&doc.analysis_text(options.include_subject)),
    };
    let emails = if options.parallel {
        documents.par_iter().map(analyze).collect()
    } else {
        documents.iter().map(analyze).collect()
    };
    Ok(AnalyzedCorpus {
        name: name.to_string(),
        label: first.label,
        emails,
        parallel: options.parallel,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosShare {
    pub tag: PennTag,
    pub count: usize,
    pub share: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordCount {
    pub origin: String,
    pub stem: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalReport {
    pub corpus: String,
    pub label: Label,
    pub config_label: String,
    pub config: ClassifierConfig,
    pub total: usize,
    pub decided_phishing: usize,
    pub decided_warning: usize,
    pub decided_legitimate: usize,
    /// Share decided phishing; only for phishing corpora.
    pub detection_rate: Option<Rational>,
    /// Share decided phishing; only for legitimate corpora.
    pub false_positive_rate: Option<Rational>,
    /// Share decided warning (zero unless the warning band is on).
    pub warning_rate: Rational,
    /// Share of decisions that agree with the corpus label.
    pub accuracy: Rational,
    pub pos_ranking: Vec<PosShare>,
    pub word_frequency: Vec<WordCount>,
    pub score_histogram: BTreeMap<Rational, usize>,
    pub emails: Vec<EmailScore>,
}

impl EvalReport {
    /// Detection rate for phishing corpora, false-positive rate for
    /// legitimate ones.
    pub fn primary_rate(&self) -> Rational {
        self.detection_rate
            .or(self.false_positive_rate)
            .unwrap_or(Rational::ZERO)
    }

    pub fn word_scores(&self) -> impl Iterator<Item = &WordScore> {
        self.emails.iter().flat_map(|e| e.word_scores.iter())
    }

    /// One console line, e.g.
    /// `fixture/phishing [expanded]: detection 10/10 (100.0%)`.
    pub fn summary_line(&self) -> String {
        let pct = |r: Rational| (r * Rational::from_integer(100)).to_fixed(1);
        let mut line = match self.label {
            Label::Legitimate => format!(
                "{} [{}]: false positives {}/{} ({}%), legitimate accuracy {}%",
                self.corpus,
                self.config_label,
                self.decided_phishing,
                self.total,
                pct(self.primary_rate()),
                pct(self.accuracy)
            ),
            _ => format!(
                "{} [{}]: detection {}/{} ({}%)",
                self.corpus,
                self.config_label,
                self.decided_phishing,
                self.total,
                pct(self.primary_rate())
            ),
        };
        if self.config.warning_band_enabled {
            line.push_str(&format!(
                ", warnings {}/{}",
                self.decided_warning, self.total
            ));
        }
        line
    }
}

/// Scores every analyzed email under one configuration.
pub fn evaluate_analyzed(
    corpus: &AnalyzedCorpus,
    lexicon: &Lexicon,
    config: &ClassifierConfig,
) -> Result<EvalReport, EvalError> {
    config.validate()?;
    if corpus.emails.is_empty() {
        return Err(EvalError::EmptyCorpus(corpus.name.clone()));
    }
    let score = |email: &AnalyzedEmail| score_tokens(&email.id, &email.tokens, lexicon, config);
    let emails: Vec<EmailScore> = if corpus.parallel {
        corpus.emails.par_iter().map(score).collect()
    } else {
        corpus.emails.iter().map(score).collect()
    };

    let count = |d: Decision| emails.iter().filter(|e| e.decision == d).count();
    let total = emails.len();
    let decided_phishing = count(Decision::Phishing);
    let decided_warning = count(Decision::Warning);
    let decided_legitimate = count(Decision::Legitimate);
    let rate = |n: usize| Rational::new(n as i64, total as i64);
    let (detection_rate, false_positive_rate, correct) = match corpus.label {
        Label::Legitimate => (None, Some(rate(decided_phishing)), decided_legitimate),
        _ => (Some(rate(decided_phishing)), None, decided_phishing),
    };

    let word_scores: Vec<&WordScore> = emails.iter().flat_map(|e| &e.word_scores).collect();
    Ok(EvalReport {
        corpus: corpus.name.clone(),
        label: corpus.label,
        config_label: config.label(),
        config: config.clone(),
        total,
        decided_phishing,
        decided_warning,
        decided_legitimate,
        detection_rate,
        false_positive_rate,
        warning_rate: rate(decided_warning),
        accuracy: rate(correct),
        pos_ranking: pos_ranking(word_scores.iter().copied()),
        word_frequency: word_frequency(word_scores.iter().copied()),
        score_histogram: score_histogram(word_scores.iter().copied()),
        emails,
    })
}

/// Analyzes and scores a labeled corpus under one configuration.
pub fn evaluate(
    name: &str,
    documents: &[EmailDocument],
    pipeline: &TextPipeline,
    lexicon: &Lexicon,
    config: &ClassifierConfig,
    options: AnalysisOptions,
) -> Result<EvalReport, EvalError> {
    let corpus = analyze_corpus(name, documents, pipeline, options)?;
    evaluate_analyzed(&corpus, lexicon, config)
}

/// Change of one configuration against the first (baseline) one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModeDelta {
    pub baseline: String,
    pub config_label: String,
    pub decided_phishing: i64,
    /// Difference in detection rate (phishing corpus) or false-positive
    /// rate (legitimate corpus).
    pub rate: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub corpus: String,
    pub reports: Vec<EvalReport>,
    /// One entry per report after the first.
    pub deltas: Vec<ModeDelta>,
}

/// Evaluates the same analyzed corpus under each configuration; deltas
/// are taken against the first.
pub fn compare_modes(
    corpus: &AnalyzedCorpus,
    lexicon: &Lexicon,
    configs: &[ClassifierConfig],
) -> Result<Comparison, EvalError> {
    if configs.len() < 2 {
        return Err(EvalError::TooFewConfigs(configs.len()));
    }
    let reports = configs
        .iter()
        .map(|config| evaluate_analyzed(corpus, lexicon, config))
        .collect::<Result<Vec<_>, _>>()?;
    let baseline = &reports[0];
    let deltas = reports[1..]
        .iter()
        .map(|r| ModeDelta {
            baseline: baseline.config_label.clone(),
            config_label: r.config_label.clone(),
            decided_phishing: r.decided_phishing as i64 - baseline.decided_phishing as i64,
            rate: r.primary_rate() - baseline.primary_rate(),
        })
        .collect();
    Ok(Comparison {
        corpus: corpus.name.clone(),
        reports,
        deltas,
    })
}

/// Matches per tag with their share of all matches, most frequent first
/// (ties in tag order).
pub fn pos_ranking<'a>(word_scores: impl IntoIterator<Item = &'a WordScore>) -> Vec<PosShare> {
    let mut counts: BTreeMap<PennTag, usize> = BTreeMap::new();
    for ws in word_scores {
        *counts.entry(ws.pos).or_default() += 1;
    }
    let total: usize = counts.values().sum();
    let mut ranking: Vec<PosShare> = counts
        .into_iter()
        .map(|(tag, count)| PosShare {
            tag,
            count,
            share: Rational::new(count as i64, total as i64),
        })
        .collect();
    ranking.sort_by(|a, b| b.count.cmp(&a.count).then(a.tag.cmp(&b.tag)));
    ranking
}

/// Matches per origin keyword, most frequent first (ties alphabetical).
pub fn word_frequency<'a>(word_scores: impl IntoIterator<Item = &'a WordScore>) -> Vec<WordCount> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for ws in word_scores {
        *counts.entry(ws.entry.origin.as_str()).or_default() += 1;
    }
    let mut table: Vec<WordCount> = counts
        .into_iter()
        .map(|(origin, count)| WordCount {
            origin: origin.to_string(),
            stem: porter_stem(origin),
            count,
        })
        .collect();
    table.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.origin.cmp(&b.origin)));
    table
}

/// Word scores (not email scores) binned by exact value.
pub fn score_histogram<'a>(
    word_scores: impl IntoIterator<Item = &'a WordScore>,
) -> BTreeMap<Rational, usize> {
    let mut histogram = BTreeMap::new();
    for ws in word_scores {
        *histogram.entry(ws.score).or_default() += 1;
    }
    histogram
}
