//! Shared helpers for the integration tests: the bundled fixtures and a
//! seeded generator of synthetic emails.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use phishtext::corpus::{load_corpus, CorpusFormat, EmailDocument, Label};
use phishtext::lexicon::{build_lexicon, Lexicon, LexiconConfig};
use phishtext::scoring::{score_email, ClassifierConfig, Decision};
use phishtext::text::TextPipeline;
use phishtext::wordnet::WordNetDb;
use phishtext::Rational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn wordnet_dir() -> PathBuf {
    tests_dir().join("data/wordnet")
}

pub fn fixture_dir(label: &str) -> PathBuf {
    tests_dir().join("fixtures/corpus").join(label)
}

/// The built-in word lists expanded with the fixture WordNet subset.
pub fn fixture_lexicon() -> Lexicon {
    let db = WordNetDb::load(&wordnet_dir()).unwrap();
    build_lexicon(&LexiconConfig::builtin(), Some(&db)).unwrap()
}

pub fn fixture_documents(label: Label) -> Vec<EmailDocument> {
    let dir = match label {
        Label::Phishing => "phishing",
        _ => "legitimate",
    };
    let corpus = load_corpus(&fixture_dir(dir), CorpusFormat::EmlDir, label).unwrap();
    assert!(corpus.skipped.is_empty());
    corpus.documents
}

pub struct Expected {
    pub email_score: Rational,
    pub decision: Decision,
    pub word_scores: Vec<(String, Rational)>,
}

/// Hand-traced results keyed by (email name, mode).
pub fn expectations() -> BTreeMap<(String, String), Expected> {
    let text = std::fs::read_to_string(tests_dir().join("fixtures/corpus/expected.tsv")).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|line| {
            let fields: Vec<&str> = line.split('\t').collect();
            let word_scores = fields
                .get(4)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.split(',')
                        .map(|pair| {
                            let (word, score) = pair.split_once('=').unwrap();
                            (word.to_string(), score.parse().unwrap())
                        })
                        .collect()
                })
                .unwrap_or_default();
            (
                (fields[0].to_string(), fields[1].to_string()),
                Expected {
                    email_score: fields[2].parse().unwrap(),
                    decision: fields[3].parse().unwrap(),
                    word_scores,
                },
            )
        })
        .collect()
}

/// Scores the fixture in both modes against the expectations; returns the
/// number of (email, mode) pairs checked and a line per mismatch.
pub fn fixture_mismatches() -> (usize, Vec<String>) {
    let lexicon = fixture_lexicon();
    let pipeline = TextPipeline::default();
    let expected = expectations();

    let mut checked = 0;
    let mut mismatches = Vec::new();
    for label in [Label::Phishing, Label::Legitimate] {
        for doc in &fixture_documents(label) {
            let tokens = pipeline.analyze(&doc.analysis_text(true));
            let name = doc.id.trim_end_matches(".eml").to_string();
            for (mode, config) in [
                ("expanded", ClassifierConfig::expanded()),
                ("original", ClassifierConfig::original()),
            ] {
                checked += 1;
                let Some(want) = expected.get(&(name.clone(), mode.to_string())) else {
                    mismatches.push(format!("{name} {mode}: no expectation"));
                    continue;
                };
                let got = score_email(doc, &tokens, &lexicon, &config);
                let got_words: Vec<(String, Rational)> = got
                    .word_scores
                    .iter()
                    .map(|w| (w.surface.clone(), w.score))
                    .collect();
                if got_words != want.word_scores
                    || got.email_score != want.email_score
                    || got.decision != want.decision
                {
                    let words: Vec<String> =
                        got_words.iter().map(|(w, s)| format!("{w}={s}")).collect();
                    mismatches.push(format!(
                        "{name} {mode}: got {} {} [{}]",
                        got.email_score,
                        got.decision,
                        words.join(",")
                    ));
                }
            }
        }
    }
    if checked != expected.len() {
        mismatches.push(format!(
            "checked {checked} pairs but expected.tsv has {}",
            expected.len()
        ));
    }
    (checked, mismatches)
}

const NOISE: &[&str] = &[
    "the",
    "your",
    "a",
    "we",
    "to",
    "of",
    "and",
    "for",
    "is",
    "this",
    "please",
    "thanks",
    "meeting",
    "report",
    "team",
    "project",
    "invoice",
    "order",
    "customer",
    "service",
    "bank",
    "password",
    "today",
    "tomorrow",
    "friday",
    "schedule",
    "budget",
    "attached",
    "document",
    "quarterly",
    "results",
    "office",
    "regards",
    "information",
    "security",
    "email",
    "payment",
    "card",
    "notice",
    "new",
    "important",
    "review",
    "agenda",
    "lunch",
    "call",
    "office",
    "weekend",
    "update",
    "questions",
    "detail",
    "number",
    "record",
    "online",
    "system",
];

const SUFFIXES: &[&str] = &["", "", "", "s", "ed", "ing"];

/// Seeded generator of random emails built from lexicon words, cue words
/// and noise words. Texts go through the real pipeline, so the tagger's
/// choices vary with context.
pub struct SyntheticEmails {
    rng: ChaCha8Rng,
    keywords: Vec<String>,
    cues: Vec<String>,
}

impl SyntheticEmails {
    pub fn new(lexicon: &Lexicon, seed: u64) -> Self {
        let config = LexiconConfig::builtin();
        let mut keywords: Vec<String> = lexicon.entries().map(|e| e.lemma.clone()).collect();
        keywords.sort();
        keywords.dedup();
        let cues = config
            .direction
            .iter()
            .chain(&config.urgency)
            .cloned()
            .collect();
        SyntheticEmails {
            rng: ChaCha8Rng::seed_from_u64(seed),
            keywords,
            cues,
        }
    }

    /// One to six sentences.
    pub fn text(&mut self) -> String {
        self.sentences(1, 6)
    }

    /// A body of typical email length (roughly 100 to 350 words).
    pub fn long_text(&mut self) -> String {
        self.sentences(12, 40)
    }

    fn sentences(&mut self, min: usize, max: usize) -> String {
        let sentences = self.rng.gen_range(min..=max);
        let mut out = String::new();
        for _ in 0..sentences {
            let length = self.rng.gen_range(3..=14);
            let mut words = Vec::with_capacity(length);
            for _ in 0..length {
                let roll: f64 = self.rng.gen();
                let word = if roll < 0.12 {
                    let word = self.keywords.choose(&mut self.rng).unwrap().clone();
                    let suffix = SUFFIXES.choose(&mut self.rng).unwrap();
                    format!("{word}{suffix}")
                } else if roll < 0.22 {
                    self.cues.choose(&mut self.rng).unwrap().clone()
                } else {
                    NOISE.choose(&mut self.rng).unwrap().to_string()
                };
                words.push(word);
            }
            if self.rng.gen_bool(0.5) {
                let first = &mut words[0];
                let mut chars = first.chars();
                let head = chars.next().unwrap().to_uppercase().to_string();
                *first = head + chars.as_str();
            }
            out.push_str(&words.join(" "));
            out.push_str([".", "!", "?"].choose(&mut self.rng).unwrap());
            out.push(' ');
        }
        out.trim_end().to_string()
    }

    pub fn documents(&mut self, prefix: &str, count: usize, label: Label) -> Vec<EmailDocument> {
        (0..count)
            .map(|i| {
                let subject = self.text();
                let body = self.text();
                self.document(prefix, i, label, subject, body)
            })
            .collect()
    }

    /// A raw RFC 822 message with a long body.
    pub fn raw_message(&mut self, i: usize) -> String {
        let subject = self.text();
        let subject = subject.split(['.', '!', '?']).next().unwrap();
        format!(
            "From: sender{i}@example.com\nTo: user@example.org\nSubject: {subject}\n\
             Content-Type: text/plain; charset=utf-8\n\n{}\n",
            self.long_text()
        )
    }

    fn document(
        &self,
        prefix: &str,
        i: usize,
        label: Label,
        subject: String,
        body: String,
    ) -> EmailDocument {
        EmailDocument {
            id: format!("{prefix}{i:05}"),
            subject: subject.split(['.', '!', '?']).next().unwrap().to_string(),
            body_text: body,
            label,
            source: format!("synthetic:{prefix}"),
            missing_text_part: false,
        }
    }
}
