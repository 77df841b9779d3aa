//! Keyword matching under a part-of-speech filter, per-word scores
//! `(w + x(1 + a)) / 2^L`, per-email aggregation and the final decision.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::EmailDocument;
use crate::lexicon::{KeywordEntry, Lexicon};
use crate::rational::Rational;
use crate::text::{PennTag, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterMode {
    /// Base-form verbs only (`VB`).
    Original,
    /// Every word tag; punctuation and symbol tags excluded.
    Expanded,
    /// A user-chosen tag set.
    Custom,
}

impl FilterMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterMode::Original => "original",
            FilterMode::Expanded => "expanded",
            FilterMode::Custom => "custom",
        }
    }
}

impl fmt::Display for FilterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FilterMode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "original" => Ok(FilterMode::Original),
            "expanded" => Ok(FilterMode::Expanded),
            "custom" => Ok(FilterMode::Custom),
            _ => Err(ConfigError::UnknownMode(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown mode {0:?} (expected original, expanded or custom)")]
    UnknownMode(String),
    #[error("a custom tag set must not be empty")]
    EmptyTagSet,
    #[error("tag {0} cannot be used for matching")]
    UnusableTag(PennTag),
    #[error("{mode} mode has a fixed tag set; tags can only be listed in custom mode")]
    FixedTagSet { mode: FilterMode },
    #[error("thresholds must satisfy 0 < warn ({warn}) <= phish ({phish})")]
    Thresholds { warn: Rational, phish: Rational },
    #[error("{name} must not be negative (got {value})")]
    NegativeWeight { name: &'static str, value: Rational },
    #[error("unknown {kind} {value:?}")]
    UnknownValue { kind: &'static str, value: String },
}

/// The tags a token may carry and still match a keyword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosFilter {
    mode: FilterMode,
    allowed: BTreeSet<PennTag>,
}

impl PosFilter {
    /// `{VB}`.
    pub fn original() -> Self {
        PosFilter {
            mode: FilterMode::Original,
            allowed: [PennTag::Vb].into_iter().collect(),
        }
    }

    /// All 36 word tags.
    pub fn expanded() -> Self {
        PosFilter {
            mode: FilterMode::Expanded,
            allowed: PennTag::word_tags().collect(),
        }
    }

    /// Rejects an empty set and tags outside the reference inventory.
    pub fn custom(tags: impl IntoIterator<Item = PennTag>) -> Result<Self, ConfigError> {
        let allowed: BTreeSet<PennTag> = tags.into_iter().collect();
        if allowed.is_empty() {
            return Err(ConfigError::EmptyTagSet);
        }
        if let Some(&tag) = allowed.iter().find(|t| t.number().is_none()) {
            return Err(ConfigError::UnusableTag(tag));
        }
        Ok(PosFilter {
            mode: FilterMode::Custom,
            allowed,
        })
    }

    /// Custom preset with every verb form: VB, VBD, VBG, VBN, VBP, VBZ.
    pub fn original_all_verbs() -> Self {
        PosFilter::custom(PennTag::INVENTORY.into_iter().filter(|t| t.is_verb()))
            .expect("verb tags are valid")
    }

    /// Builds a filter from a mode and, for custom mode only, a tag list.
    pub fn from_mode(mode: FilterMode, tags: Option<Vec<PennTag>>) -> Result<Self, ConfigError> {
        match (mode, tags) {
            (FilterMode::Custom, Some(tags)) => PosFilter::custom(tags),
            (FilterMode::Custom, None) => Err(ConfigError::EmptyTagSet),
            (mode, Some(_)) => Err(ConfigError::FixedTagSet { mode }),
            (FilterMode::Original, None) => Ok(PosFilter::original()),
            (FilterMode::Expanded, None) => Ok(PosFilter::expanded()),
        }
    }

    pub fn mode(&self) -> FilterMode {
        self.mode
    }

    pub fn allows(&self, tag: PennTag) -> bool {
        self.allowed.contains(&tag)
    }

    pub fn tags(&self) -> impl Iterator<Item = PennTag> + '_ {
        self.allowed.iter().copied()
    }

    pub fn is_subset_of(&self, other: &PosFilter) -> bool {
        self.allowed.is_subset(&other.allowed)
    }

    /// `original`, `expanded`, or `custom[TAG,...]`.
    pub fn label(&self) -> String {
        match self.mode {
            FilterMode::Custom => {
                let tags: Vec<&str> = self.allowed.iter().map(|t| t.as_str()).collect();
                format!("custom[{}]", tags.join(","))
            }
            mode => mode.to_string(),
        }
    }
}

impl Default for PosFilter {
    fn default() -> Self {
        PosFilter::expanded()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosFilterRepr {
    mode: FilterMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tags: Option<Vec<PennTag>>,
}

impl Serialize for PosFilter {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let tags =
            (self.mode == FilterMode::Custom).then(|| self.allowed.iter().copied().collect());
        PosFilterRepr {
            mode: self.mode,
            tags,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PosFilter {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PosFilterRepr::deserialize(deserializer)?;
        PosFilter::from_mode(repr.mode, repr.tags).map_err(serde::de::Error::custom)
    }
}

/// Variants are ordered as listed; for [`Decision`] that is by severity.
macro_rules! keyword_enum {
    ($name:ident, $kind:literal, { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "lowercase")]
        pub enum $name {
            $($variant,)+
        }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text,)+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = ConfigError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($name::$variant),)+
                    _ => Err(ConfigError::UnknownValue { kind: $kind, value: s.to_string() }),
                }
            }
        }
    };
}

keyword_enum!(Aggregation, "aggregation", { Max => "max", Sum => "sum" });
keyword_enum!(CueScope, "scope", { Sentence => "sentence", Email => "email" });
keyword_enum!(Decision, "decision", {
    Legitimate => "legitimate",
    Warning => "warning",
    Phishing => "phishing",
});

/// Everything that turns matches into a decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierConfig {
    pub pos_filter: PosFilter,
    pub aggregation: Aggregation,
    /// `x` contributed by a direction word without its own weight.
    pub x_weight_default: Rational,
    /// `a` contributed by an urgency word without its own weight.
    pub a_weight_default: Rational,
    pub direction_scope: CueScope,
    pub urgency_scope: CueScope,
    /// Lower edge of the warning band; unused unless the band is enabled.
    pub theta_warn: Rational,
    pub theta_phish: Rational,
    pub warning_band_enabled: bool,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            pos_filter: PosFilter::expanded(),
            aggregation: Aggregation::Max,
            x_weight_default: Rational::new(1, 2),
            a_weight_default: Rational::ONE,
            direction_scope: CueScope::Sentence,
            urgency_scope: CueScope::Email,
            theta_warn: Rational::ONE,
            theta_phish: Rational::ONE,
            warning_band_enabled: false,
        }
    }
}

impl ClassifierConfig {
    pub fn original() -> Self {
        ClassifierConfig::with_filter(PosFilter::original())
    }

    pub fn expanded() -> Self {
        ClassifierConfig::with_filter(PosFilter::expanded())
    }

    pub fn with_filter(pos_filter: PosFilter) -> Self {
        ClassifierConfig {
            pos_filter,
            ..ClassifierConfig::default()
        }
    }

    /// Enables the three-way decision with warn 1.0 and phish 1.5.
    pub fn with_warning_band(mut self) -> Self {
        self.warning_band_enabled = true;
        self.theta_warn = Rational::ONE;
        self.theta_phish = Rational::new(3, 2);
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, value) in [
            ("x_weight_default", self.x_weight_default),
            ("a_weight_default", self.a_weight_default),
        ] {
            if value.is_negative() {
                return Err(ConfigError::NegativeWeight { name, value });
            }
        }
        if self.theta_warn <= Rational::ZERO || self.theta_warn > self.theta_phish {
            return Err(ConfigError::Thresholds {
                warn: self.theta_warn,
                phish: self.theta_phish,
            });
        }
        Ok(())
    }

    /// Short name for reports: the filter label.
    pub fn label(&self) -> String {
        self.pos_filter.label()
    }

    /// Ties at a threshold go to the higher category.
    pub fn decide(&self, email_score: Rational) -> Decision {
        if email_score >= self.theta_phish {
            Decision::Phishing
        } else if self.warning_band_enabled && email_score >= self.theta_warn {
            Decision::Warning
        } else {
            Decision::Legitimate
        }
    }
}

/// One keyword match and its score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordScore {
    pub sentence_index: usize,
    pub token_index: usize,
    pub surface: String,
    pub pos: PennTag,
    pub entry: KeywordEntry,
    pub x: Rational,
    pub a: Rational,
    pub score: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmailScore {
    pub email_id: String,
    pub word_scores: Vec<WordScore>,
    pub email_score: Rational,
    pub decision: Decision,
}

/// `(entry.weight + x(1 + a)) / 2^entry.level`, exactly.
pub fn score_word(entry: &KeywordEntry, x: Rational, a: Rational) -> Rational {
    (entry.weight + x * (Rational::ONE + a)).halved(u32::from(entry.level))
}

/// Largest cue weight per sentence, or one value for the whole email.
struct CueWeights {
    scope: CueScope,
    per_sentence: Vec<Rational>,
}

impl CueWeights {
    fn collect(
        tokens: &[Token],
        scope: CueScope,
        default: Rational,
        weight_of: impl Fn(&str) -> Option<Option<Rational>>,
    ) -> Self {
        let sentences = tokens
            .iter()
            .map(|t| t.sentence_index + 1)
            .max()
            .unwrap_or(0);
        let mut per_sentence = vec![Rational::ZERO; sentences];
        for token in tokens {
            if let Some(weight) = weight_of(&token.stem) {
                let slot = &mut per_sentence[token.sentence_index];
                *slot = (*slot).max(weight.unwrap_or(default));
            }
        }
        if scope == CueScope::Email {
            let overall = per_sentence.iter().copied().max().unwrap_or(Rational::ZERO);
            per_sentence.iter_mut().for_each(|w| *w = overall);
        }
        CueWeights {
            scope,
            per_sentence,
        }
    }

    fn at(&self, sentence_index: usize) -> Rational {
        debug_assert!(self.scope == CueScope::Email || sentence_index < self.per_sentence.len());
        self.per_sentence
            .get(sentence_index)
            .copied()
            .unwrap_or(Rational::ZERO)
    }
}

/// Scores every token that is not a stopword, carries an allowed tag and
/// whose stem is an actionable keyword. `x` is the largest direction weight
/// in scope (0 when none), `a` likewise for urgency. Cue words are found
/// regardless of tag and stopword status.
pub fn find_matches(
    tokens: &[Token],
    lexicon: &Lexicon,
    config: &ClassifierConfig,
) -> Vec<WordScore> {
    let direction = CueWeights::collect(
        tokens,
        config.direction_scope,
        config.x_weight_default,
        |stem| lexicon.direction_weight(stem),
    );
    let urgency = CueWeights::collect(
        tokens,
        config.urgency_scope,
        config.a_weight_default,
        |stem| lexicon.urgency_weight(stem),
    );
    tokens
        .iter()
        .filter(|t| !t.is_stopword && config.pos_filter.allows(t.pos))
        .filter_map(|t| {
            let entry = lexicon.lookup(&t.stem)?;
            let x = direction.at(t.sentence_index);
            let a = urgency.at(t.sentence_index);
            Some(WordScore {
                sentence_index: t.sentence_index,
                token_index: t.token_index,
                surface: t.surface.clone(),
                pos: t.pos,
                entry: entry.clone(),
                x,
                a,
                score: score_word(entry, x, a),
            })
        })
        .collect()
}

pub fn aggregate(word_scores: &[WordScore], aggregation: Aggregation) -> Rational {
    let scores = word_scores.iter().map(|w| w.score);
    match aggregation {
        Aggregation::Max => scores.max().unwrap_or(Rational::ZERO),
        Aggregation::Sum => scores.sum(),
    }
}

/// Matches, aggregates and decides for one email's tokens.
pub fn score_tokens(
    email_id: &str,
    tokens: &[Token],
    lexicon: &Lexicon,
    config: &ClassifierConfig,
) -> EmailScore {
    let word_scores = find_matches(tokens, lexicon, config);
    let email_score = aggregate(&word_scores, config.aggregation);
    EmailScore {
        email_id: email_id.to_string(),
        decision: config.decide(email_score),
        word_scores,
        email_score,
    }
}

pub fn score_email(
    doc: &EmailDocument,
    tokens: &[Token],
    lexicon: &Lexicon,
    config: &ClassifierConfig,
) -> EmailScore {
    score_tokens(&doc.id, tokens, lexicon, config)
}

pub fn classify(score: &EmailScore, config: &ClassifierConfig) -> Decision {
    config.decide(score.email_score)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{build_lexicon, LexiconConfig};
    use crate::text::{load_pretagged, StopwordList};

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn entry(weight: &str, level: u8) -> KeywordEntry {
        KeywordEntry {
            stem: "click".into(),
            origin: "click".into(),
            lemma: "click".into(),
            level,
            relation: None,
            weight: r(weight),
        }
    }

    fn lexicon() -> Lexicon {
        build_lexicon(&LexiconConfig::builtin(), None).unwrap()
    }

    fn tokens(tsv: &str) -> Vec<Token> {
        load_pretagged(tsv, StopwordList::builtin()).unwrap()
    }

    #[test]
    fn score_word_examples() {
        assert_eq!(score_word(&entry("1", 0), r("0"), r("0")), r("1"));
        assert_eq!(score_word(&entry("1", 0), r("0.5"), r("0")), r("1.5"));
        assert_eq!(score_word(&entry("1", 0), r("0.5"), r("1")), r("2"));
        assert_eq!(score_word(&entry("1.2", 0), r("1"), r("0")), r("2.2"));
        assert_eq!(score_word(&entry("1", 1), r("0"), r("0")), r("0.5"));
    }

    #[test]
    fn click_here_immediately() {
        let lex = lexicon();
        let verb = tokens("Click\tVB\nhere\tRB\nimmediately\tRB\n");
        let matches = find_matches(&verb, &lex, &ClassifierConfig::default());
        assert_eq!(matches.len(), 1);
        assert_eq!(
            (matches[0].x, matches[0].a, matches[0].score),
            (r("0.5"), r("1"), r("2"))
        );

        let mistagged = tokens("Click\tNNP\nhere\tRB\nimmediately\tRB\n");
        assert!(find_matches(&mistagged, &lex, &ClassifierConfig::original()).is_empty());
        let expanded = find_matches(&mistagged, &lex, &ClassifierConfig::expanded());
        assert_eq!(expanded.len(), 1);
        assert_eq!(expanded[0].score, r("2"));

        assert!(
            find_matches(&tokens("Hello\tUH\n"), &lex, &ClassifierConfig::default()).is_empty()
        );
    }

    #[test]
    fn cue_scopes() {
        let lex = lexicon();
        let text = tokens("Click\tVB\nnow\tRB\n\nLink\tNN\nbelow\tIN\n");
        let default = find_matches(&text, &lex, &ClassifierConfig::default());
        // Direction words sit in the other sentence; urgency is email-wide.
        assert_eq!((default[0].x, default[0].a), (r("0"), r("1")));
        let config = ClassifierConfig {
            direction_scope: CueScope::Email,
            urgency_scope: CueScope::Sentence,
            ..ClassifierConfig::default()
        };
        let widened = find_matches(&text, &lex, &config);
        assert_eq!((widened[0].x, widened[0].a), (r("0.5"), r("1")));
    }

    #[test]
    fn stopwords_never_match() {
        let mut cfg = LexiconConfig::builtin();
        cfg.actionable.push("do".into());
        let lex = build_lexicon(&cfg, None).unwrap();
        assert!(find_matches(&tokens("do\tVB\n"), &lex, &ClassifierConfig::default()).is_empty());
    }

    #[test]
    fn aggregation_rules() {
        let lex = lexicon();
        let text = tokens("Click\tVB\n\nVerify\tVB\nhere\tRB\n");
        let max = score_tokens("e", &text, &lex, &ClassifierConfig::default());
        assert_eq!(max.email_score, r("1.5"));
        let config = ClassifierConfig {
            aggregation: Aggregation::Sum,
            ..ClassifierConfig::default()
        };
        assert_eq!(
            score_tokens("e", &text, &lex, &config).email_score,
            r("2.5")
        );
        let none = score_tokens("e", &[], &lex, &ClassifierConfig::default());
        assert_eq!(
            (none.email_score, none.decision),
            (Rational::ZERO, Decision::Legitimate)
        );
    }

    #[test]
    fn decisions() {
        let binary = ClassifierConfig::default();
        assert_eq!(binary.decide(r("0.5")), Decision::Legitimate);
        assert_eq!(binary.decide(r("1")), Decision::Phishing);
        let band = ClassifierConfig::default().with_warning_band();
        assert_eq!(band.decide(r("0.75")), Decision::Legitimate);
        assert_eq!(band.decide(r("1")), Decision::Warning);
        assert_eq!(band.decide(r("1.5")), Decision::Phishing);
        assert_eq!(band.decide(r("2")), Decision::Phishing);
    }

    #[test]
    fn filters() {
        assert!(PosFilter::original().is_subset_of(&PosFilter::expanded()));
        assert!(PosFilter::original_all_verbs().is_subset_of(&PosFilter::expanded()));
        assert_eq!(PosFilter::expanded().tags().count(), 36);
        assert!(!PosFilter::expanded().allows(PennTag::Unknown));
        assert_eq!(PosFilter::custom([]), Err(ConfigError::EmptyTagSet));
        assert_eq!(
            PosFilter::custom([PennTag::Unknown]),
            Err(ConfigError::UnusableTag(PennTag::Unknown))
        );
        assert!(PosFilter::from_mode(FilterMode::Original, Some(vec![PennTag::Nn])).is_err());
        assert_eq!(
            PosFilter::original_all_verbs().label(),
            "custom[VB,VBD,VBG,VBN,VBP,VBZ]"
        );
    }

    #[test]
    fn config_validation_and_serde() {
        assert!(ClassifierConfig::default().validate().is_ok());
        let mut bad = ClassifierConfig::default().with_warning_band();
        bad.theta_warn = r("2");
        assert!(bad.validate().is_err());
        bad.theta_warn = r("0");
        assert!(bad.validate().is_err());

        let config =
            ClassifierConfig::with_filter(PosFilter::original_all_verbs()).with_warning_band();
        let json = serde_json::to_string(&config).unwrap();
        assert_eq!(
            serde_json::from_str::<ClassifierConfig>(&json).unwrap(),
            config
        );
        let partial: ClassifierConfig =
            serde_json::from_str(r#"{"pos_filter":{"mode":"original"},"theta_phish":"3/2"}"#)
                .unwrap();
        assert_eq!(partial.pos_filter, PosFilter::original());
        assert_eq!(partial.theta_phish, r("1.5"));
        assert!(
            serde_json::from_str::<ClassifierConfig>(r#"{"pos_filter":{"mode":"custom"}}"#)
                .is_err()
        );
        assert!(serde_json::from_str::<ClassifierConfig>(r#"{"threshold":1}"#).is_err());
    }
}
