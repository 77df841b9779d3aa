//! Built-in lexicon and suffix-rule part-of-speech tagger.
//!
//! Resolution order for a word token: lexicon lookup (with two small context
//! rules for ambiguous entries), then suffix rules, then the default `NN`.
//! A sentence-initial token whose lowercase form is a known verb is tagged
//! `VB` when the imperative heuristic is on.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::tag::PennTag;
use super::tokenize::{is_punct, looks_like_email, looks_like_url};

pub const BUILTIN_TAGGER_LEXICON: &str = include_str!("../../data/tagger_lexicon.tsv");

#[derive(Debug, thiserror::Error)]
pub enum TaggerLexiconError {
    #[error("tagger lexicon line {line}: expected \"word<TAB>tag\"")]
    Malformed { line: usize },
    #[error("tagger lexicon line {line}: {source}")]
    BadTag {
        line: usize,
        source: super::tag::UnknownTagError,
    },
}

/// Tags known for one word; `primary` is the most frequent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconTags {
    pub primary: PennTag,
    pub alternates: Vec<PennTag>,
}

impl LexiconTags {
    pub fn contains(&self, tag: PennTag) -> bool {
        self.primary == tag || self.alternates.contains(&tag)
    }

    fn is_ambiguous(&self) -> bool {
        !self.alternates.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixRule {
    pub suffix: String,
    /// Minimum token length, in characters, for the rule to fire.
    pub min_len: usize,
    pub tag: PennTag,
    /// Endings that block the rule (`ss` blocks the plural rule).
    pub except: Vec<String>,
}

impl SuffixRule {
    fn new(suffix: &str, min_len: usize, tag: PennTag, except: &[&str]) -> Self {
        SuffixRule {
            suffix: suffix.to_string(),
            min_len,
            tag,
            except: except.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn matches(&self, lower: &str) -> bool {
        lower.chars().count() >= self.min_len
            && lower.ends_with(&self.suffix)
            && !self.except.iter().any(|e| lower.ends_with(e.as_str()))
    }
}

#[derive(Debug, Clone)]
pub struct TaggerModel {
    lexicon: HashMap<String, LexiconTags>,
    suffix_rules: Vec<SuffixRule>,
    imperative_heuristic: bool,
}

impl TaggerModel {
    /// Parses `word<TAB>tag[<TAB>alternate...]` lines. Words are case-folded.
    pub fn from_lexicon(text: &str) -> Result<Self, TaggerLexiconError> {
        let mut lexicon = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let word = fields.next().unwrap_or("").trim();
            let mut tags = Vec::new();
            for field in fields {
                let tag = field.trim().parse::<PennTag>().map_err(|source| {
                    TaggerLexiconError::BadTag {
                        line: line_no,
                        source,
                    }
                })?;
                tags.push(tag);
            }
            if word.is_empty() || tags.is_empty() {
                return Err(TaggerLexiconError::Malformed { line: line_no });
            }
            let primary = tags.remove(0);
            lexicon.insert(
                word.to_lowercase(),
                LexiconTags {
                    primary,
                    alternates: tags,
                },
            );
        }
        Ok(TaggerModel {
            lexicon,
            suffix_rules: Self::default_suffix_rules(),
            imperative_heuristic: true,
        })
    }

    pub fn builtin() -> &'static TaggerModel {
        static MODEL: OnceLock<TaggerModel> = OnceLock::new();
        MODEL.get_or_init(|| {
            TaggerModel::from_lexicon(BUILTIN_TAGGER_LEXICON).expect("bundled lexicon is valid")
        })
    }

    pub fn default_suffix_rules() -> Vec<SuffixRule> {
        vec![
            SuffixRule::new("ing", 5, PennTag::Vbg, &[]),
            SuffixRule::new("ed", 4, PennTag::Vbn, &[]),
            SuffixRule::new("ly", 4, PennTag::Rb, &[]),
            SuffixRule::new("s", 4, PennTag::Nns, &["ss", "us", "is"]),
        ]
    }

    pub fn with_imperative_heuristic(mut self, enabled: bool) -> Self {
        self.imperative_heuristic = enabled;
        self
    }

    pub fn with_suffix_rules(mut self, rules: Vec<SuffixRule>) -> Self {
        self.suffix_rules = rules;
        self
    }

    pub fn imperative_heuristic(&self) -> bool {
        self.imperative_heuristic
    }

    pub fn lookup(&self, word: &str) -> Option<&LexiconTags> {
        self.lexicon.get(&word.to_lowercase())
    }

    pub fn lexicon_len(&self) -> usize {
        self.lexicon.len()
    }

    pub fn is_known_verb(&self, word: &str) -> bool {
        self.lookup(word).is_some_and(|t| t.contains(PennTag::Vb))
    }

    /// Tags one sentence; returns exactly one tag per token.
    pub fn tag<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<PennTag> {
        let mut tags: Vec<PennTag> = Vec::with_capacity(tokens.len());
        for (i, token) in tokens.iter().enumerate() {
            let token = token.as_ref();
            let prev = tags.last().copied();
            let prev_word = i.checked_sub(1).map(|p| tokens[p].as_ref().to_lowercase());
            let mut tag = self.tag_token(token, i, prev, prev_word.as_deref());
            if i == 0 && self.imperative_heuristic && self.is_known_verb(token) {
                tag = PennTag::Vb;
            }
            tags.push(tag);
        }
        tags
    }

    fn tag_token(
        &self,
        token: &str,
        index: usize,
        prev: Option<PennTag>,
        prev_word: Option<&str>,
    ) -> PennTag {
        if token.chars().all(is_punct) {
            return punct_tag(token);
        }
        if !token.chars().any(char::is_alphanumeric) {
            return PennTag::Unknown;
        }
        if let Some(tag) = clitic_tag(token, prev_word) {
            return tag;
        }
        if looks_like_url(token) || looks_like_email(token) {
            return PennTag::Nn;
        }
        let lower = token.to_lowercase();
        if let Some(entry) = self.lexicon.get(&lower) {
            return contextual(entry, prev);
        }
        if let Some(rule) = self.suffix_rules.iter().find(|r| r.matches(&lower)) {
            return rule.tag;
        }
        if index > 0 && token.chars().next().is_some_and(char::is_uppercase) {
            return PennTag::Nnp;
        }
        if is_numeric(token) {
            return PennTag::Cd;
        }
        PennTag::Nn
    }
}

impl Default for TaggerModel {
    fn default() -> Self {
        TaggerModel::builtin().clone()
    }
}

/// Free-function form of [`TaggerModel::tag`].
pub fn tag_pos<S: AsRef<str>>(tokens: &[S], model: &TaggerModel) -> Vec<PennTag> {
    model.tag(tokens)
}

fn contextual(entry: &LexiconTags, prev: Option<PennTag>) -> PennTag {
    if !entry.is_ambiguous() {
        return entry.primary;
    }
    match prev {
        Some(PennTag::To | PennTag::Md) if entry.contains(PennTag::Vb) => PennTag::Vb,
        Some(
            PennTag::Dt
            | PennTag::PrpS
            | PennTag::Jj
            | PennTag::Jjr
            | PennTag::Jjs
            | PennTag::Pos
            | PennTag::Cd,
        ) if entry.contains(PennTag::Nn) => PennTag::Nn,
        _ => entry.primary,
    }
}

fn clitic_tag(token: &str, prev_word: Option<&str>) -> Option<PennTag> {
    let lower = token.replace('\u{2019}', "'").to_lowercase();
    let tag = match lower.as_str() {
        "n't" => PennTag::Rb,
        "'s" => match prev_word {
            Some("it" | "that" | "there" | "he" | "she" | "what" | "who" | "here" | "where") => {
                PennTag::Vbz
            }
            Some("let") => PennTag::Prp,
            _ => PennTag::Pos,
        },
        "'re" | "'ve" | "'m" => PennTag::Vbp,
        "'ll" | "'d" => PennTag::Md,
        _ => return None,
    };
    Some(tag)
}

fn punct_tag(token: &str) -> PennTag {
    match token {
        "." | "!" | "?" => PennTag::Period,
        "," => PennTag::Comma,
        ":" | ";" | "-" | "--" | "..." | "\u{2026}" | "\u{2013}" | "\u{2014}" => PennTag::Colon,
        "(" | "[" | "{" => PennTag::LeftBracket,
        ")" | "]" | "}" => PennTag::RightBracket,
        "\"" => PennTag::StraightQuote,
        "`" | "\u{2018}" => PennTag::OpenSingleQuote,
        "``" | "\u{201c}" | "\u{ab}" => PennTag::OpenDoubleQuote,
        "'" | "\u{2019}" => PennTag::CloseSingleQuote,
        "''" | "\u{201d}" | "\u{bb}" => PennTag::CloseDoubleQuote,
        "$" => PennTag::Dollar,
        "#" => PennTag::Pound,
        _ if token.chars().all(|c| c == '.') => PennTag::Colon,
        _ if token.chars().all(|c| c == '-') => PennTag::Colon,
        _ => PennTag::Sym,
    }
}

fn is_numeric(token: &str) -> bool {
    token.chars().any(|c| c.is_ascii_digit())
        && token
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, ',' | '.' | '/' | '-' | ':'))
}
