//! The matching lexicon: actionable keywords (configured words at level 0,
//! their first-sense WordNet expansions at level 1) plus direction and
//! urgency cue words, all keyed by Porter stem.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::text::porter_stem;
use crate::wordnet::{Relation, WordNetDb};

/// Shipped default word lists, all weights 1.
pub const DEFAULT_LEXICON_CONFIG: &str = include_str!("../data/default_lexicon.json");

/// The default lists with per-word weights click 1.0, update 1.2, use 1.4.
pub const FREQUENCY_WEIGHTED_CONFIG: &str = include_str!("../data/frequency_weights.json");

/// Format tag written into lexicon artifacts.
pub const ARTIFACT_FORMAT: &str = "phishtext-lexicon";

/// Current artifact version; loading any other version fails.
pub const ARTIFACT_VERSION: u32 = 1;

/// Word lists and optional weights, as written in the JSON config file.
///
/// `weights` maps a word to its value `w` in the scoring formula (for an
/// actionable word or expansion lemma) or to its `x` / `a` contribution (for
/// a direction or urgency word). Words without a weight use 1 for keywords
/// and the classifier's default for cue words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconConfig {
    pub actionable: Vec<String>,
    #[serde(default)]
    pub direction: Vec<String>,
    #[serde(default)]
    pub urgency: Vec<String>,
    #[serde(default)]
    pub weights: BTreeMap<String, Rational>,
}

impl LexiconConfig {
    pub fn builtin() -> Self {
        LexiconConfig::from_json(DEFAULT_LEXICON_CONFIG).expect("built-in config is valid")
    }

    pub fn frequency_weighted() -> Self {
        LexiconConfig::from_json(FREQUENCY_WEIGHTED_CONFIG).expect("built-in config is valid")
    }

    pub fn from_json(json: &str) -> Result<Self, LexiconError> {
        serde_json::from_str(json).map_err(|e| LexiconError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = fs::read_to_string(path)
            .map_err(|e| LexiconError::Config(format!("{}: {e}", path.display())))?;
        LexiconConfig::from_json(&text)
            .map_err(|e| LexiconError::Config(format!("{}: {e}", path.display())))
    }

    fn weight_of(&self, word: &str) -> Option<Rational> {
        self.weights.get(word).copied()
    }
}

impl Default for LexiconConfig {
    fn default() -> Self {
        LexiconConfig::builtin()
    }
}

/// Which configured list a word came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordSet {
    Actionable,
    Direction,
    Urgency,
}

impl fmt::Display for WordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WordSet::Actionable => "actionable",
            WordSet::Direction => "direction",
            WordSet::Urgency => "urgency",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("invalid lexicon config: {0}")]
    Config(String),
    #[error("the actionable word list is empty")]
    EmptyActionable,
    #[error("invalid {set} word {word:?}: words must be non-empty and contain no whitespace")]
    InvalidWord { set: WordSet, word: String },
    #[error("weight for {word:?} is negative ({weight})")]
    NegativeWeight { word: String, weight: Rational },
    #[error("{first_set} word {first:?} and {second_set} word {second:?} share the stem {stem:?}")]
    Collision {
        stem: String,
        first: String,
        first_set: WordSet,
        second: String,
        second_set: WordSet,
    },
    #[error("invalid lexicon artifact: {0}")]
    Artifact(String),
}

/// One actionable keyword, as matched by its stem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordEntry {
    pub stem: String,
    /// The configured actionable word this entry derives from.
    pub origin: String,
    /// The word form that produced `stem`: the origin itself at level 0,
    /// the WordNet lemma at level 1.
    pub lemma: String,
    /// Expansion distance `L`: 0 for configured words, 1 for expansions.
    pub level: u8,
    /// How the lemma relates to the origin; absent at level 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<Relation>,
    /// The `w` of the scoring formula.
    pub weight: Rational,
}

/// An expansion lemma left out because its stem is a cue-word stem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedExpansion {
    pub lemma: String,
    pub origin: String,
    pub stem: String,
    pub conflicts_with: WordSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    /// Entries per stem, level 0 first, then in config order of origin.
    actionable: BTreeMap<String, Vec<KeywordEntry>>,
    /// Direction stems with an optional explicit weight.
    direction: BTreeMap<String, Option<Rational>>,
    urgency: BTreeMap<String, Option<Rational>>,
    dropped: Vec<DroppedExpansion>,
    wordnet_version: Option<String>,
}

fn normalize(set: WordSet, word: &str) -> Result<String, LexiconError> {
    let word = word.trim().to_lowercase();
    if word.is_empty() || word.chars().any(char::is_whitespace) {
        return Err(LexiconError::InvalidWord { set, word });
    }
    Ok(word)
}

/// Builds the lexicon. Without a WordNet database only level-0 entries are
/// produced.
pub fn build_lexicon(
    config: &LexiconConfig,
    db: Option<&WordNetDb>,
) -> Result<Lexicon, LexiconError> {
    if config.actionable.is_empty() {
        return Err(LexiconError::EmptyActionable);
    }
    let weights: BTreeMap<String, Rational> = config
        .weights
        .iter()
        .map(|(word, &weight)| (word.trim().to_lowercase(), weight))
        .collect();
    if let Some((word, &weight)) = weights.iter().find(|(_, w)| w.is_negative()) {
        return Err(LexiconError::NegativeWeight {
            word: word.clone(),
            weight,
        });
    }
    let config = LexiconConfig {
        weights,
        ..config.clone()
    };

    // stem -> (first word seen, its set), to report collisions by name.
    let mut owners: BTreeMap<String, (String, WordSet)> = BTreeMap::new();
    let mut lexicon = Lexicon {
        wordnet_version: db.and_then(|db| db.version().map(str::to_string)),
        ..Lexicon::default()
    };

    let sets = [
        (WordSet::Actionable, &config.actionable),
        (WordSet::Direction, &config.direction),
        (WordSet::Urgency, &config.urgency),
    ];
    let mut actionable_words = Vec::new();
    for (set, words) in sets {
        for raw in words {
            let word = normalize(set, raw)?;
            let stem = porter_stem(&word);
            match owners.get(&stem) {
                Some((other, other_set)) if *other_set != set => {
                    return Err(LexiconError::Collision {
                        stem,
                        first: other.clone(),
                        first_set: *other_set,
                        second: word,
                        second_set: set,
                    });
                }
                Some(_) => {}
                None => {
                    owners.insert(stem.clone(), (word.clone(), set));
                }
            }
            let weight = config.weight_of(&word);
            match set {
                WordSet::Actionable => {
                    let entries = lexicon.actionable.entry(stem.clone()).or_default();
                    if entries.iter().any(|e| e.origin == word) {
                        continue;
                    }
                    entries.push(KeywordEntry {
                        stem,
                        origin: word.clone(),
                        lemma: word.clone(),
                        level: 0,
                        relation: None,
                        weight: weight.unwrap_or(Rational::ONE),
                    });
                    actionable_words.push(word);
                }
                WordSet::Direction => merge_cue(&mut lexicon.direction, stem, weight),
                WordSet::Urgency => merge_cue(&mut lexicon.urgency, stem, weight),
            }
        }
    }

    let Some(db) = db else {
        return Ok(lexicon);
    };
    for origin in &actionable_words {
        let origin_weight = config.weight_of(origin).unwrap_or(Rational::ONE);
        let mut seen = BTreeSet::new();
        for (lemma, relation) in db.first_sense_expansion(origin) {
            let stem = porter_stem(&lemma);
            let conflict = if lexicon.direction.contains_key(&stem) {
                Some(WordSet::Direction)
            } else if lexicon.urgency.contains_key(&stem) {
                Some(WordSet::Urgency)
            } else {
                None
            };
            if let Some(conflicts_with) = conflict {
                log::info!(
                    "dropping expansion {lemma:?} of {origin:?}: stem {stem:?} is a {conflicts_with} word"
                );
                lexicon.dropped.push(DroppedExpansion {
                    lemma,
                    origin: origin.clone(),
                    stem,
                    conflicts_with,
                });
                continue;
            }
            let entries = lexicon.actionable.entry(stem.clone()).or_default();
            if entries.iter().any(|e| e.level == 0) || !seen.insert(stem.clone()) {
                continue;
            }
            let weight = config.weight_of(&lemma).unwrap_or(origin_weight);
            entries.push(KeywordEntry {
                stem,
                origin: origin.clone(),
                lemma,
                level: 1,
                relation: Some(relation),
                weight,
            });
        }
    }
    Ok(lexicon)
}

/// Keeps the larger explicit weight when two words share a stem.
fn merge_cue(map: &mut BTreeMap<String, Option<Rational>>, stem: String, weight: Option<Rational>) {
    let slot = map.entry(stem).or_insert(None);
    *slot = match (*slot, weight) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
}

impl Lexicon {
    /// The entry a token with this stem matches: lowest level first, then
    /// earliest origin in config order.
    pub fn lookup(&self, stem: &str) -> Option<&KeywordEntry> {
        self.actionable.get(stem)?.iter().min_by_key(|e| e.level)
    }

    /// All entries, ordered by stem.
    pub fn entries(&self) -> impl Iterator<Item = &KeywordEntry> {
        self.actionable.values().flatten()
    }

    /// Number of distinct actionable stems.
    pub fn len(&self) -> usize {
        self.actionable.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actionable.is_empty()
    }

    /// Entry counts at level 0 and level 1.
    pub fn level_counts(&self) -> [usize; 2] {
        let mut counts = [0; 2];
        for entry in self.entries() {
            counts[usize::from(entry.level.min(1))] += 1;
        }
        counts
    }

    pub fn is_direction(&self, stem: &str) -> bool {
        self.direction.contains_key(stem)
    }

    pub fn is_urgency(&self, stem: &str) -> bool {
        self.urgency.contains_key(stem)
    }

    /// Explicit weight of a direction stem; `None` when the stem is not a
    /// direction word, `Some(None)` when it uses the classifier default.
    pub fn direction_weight(&self, stem: &str) -> Option<Option<Rational>> {
        self.direction.get(stem).copied()
    }

    pub fn urgency_weight(&self, stem: &str) -> Option<Option<Rational>> {
        self.urgency.get(stem).copied()
    }

    pub fn direction_stems(&self) -> impl Iterator<Item = &str> {
        self.direction.keys().map(String::as_str)
    }

    pub fn urgency_stems(&self) -> impl Iterator<Item = &str> {
        self.urgency.keys().map(String::as_str)
    }

    /// Expansions left out because they collided with cue words.
    pub fn dropped(&self) -> &[DroppedExpansion] {
        &self.dropped
    }

    pub fn wordnet_version(&self) -> Option<&str> {
        self.wordnet_version.as_deref()
    }

    pub fn to_artifact_json(&self) -> String {
        let artifact = Artifact {
            format: ARTIFACT_FORMAT.to_string(),
            version: ARTIFACT_VERSION,
            wordnet_version: self.wordnet_version.clone(),
            actionable: self.entries().cloned().collect(),
            direction: self.direction.clone(),
            urgency: self.urgency.clone(),
            dropped: self.dropped.clone(),
        };
        let mut json = serde_json::to_string_pretty(&artifact).expect("lexicon serializes");
        json.push('\n');
        json
    }

    /// Parses and validates an artifact written by [`Lexicon::to_artifact_json`].
    pub fn from_artifact_json(json: &str) -> Result<Self, LexiconError> {
        let bad = |reason: String| LexiconError::Artifact(reason);
        let artifact: Artifact = serde_json::from_str(json).map_err(|e| bad(e.to_string()))?;
        if artifact.format != ARTIFACT_FORMAT {
            return Err(bad(format!(
                "format is {:?}, expected {ARTIFACT_FORMAT:?}",
                artifact.format
            )));
        }
        if artifact.version != ARTIFACT_VERSION {
            return Err(bad(format!(
                "version {} is not supported (expected {ARTIFACT_VERSION})",
                artifact.version
            )));
        }
        if artifact.actionable.is_empty() {
            return Err(LexiconError::EmptyActionable);
        }
        let mut actionable: BTreeMap<String, Vec<KeywordEntry>> = BTreeMap::new();
        for entry in artifact.actionable {
            if entry.level > 1 {
                return Err(bad(format!("{:?} has level {}", entry.stem, entry.level)));
            }
            if entry.weight.is_negative() {
                return Err(bad(format!("{:?} has a negative weight", entry.stem)));
            }
            if entry.stem.is_empty() || entry.stem != porter_stem(&entry.lemma) {
                return Err(bad(format!(
                    "stem {:?} is not the stem of {:?}",
                    entry.stem, entry.lemma
                )));
            }
            actionable
                .entry(entry.stem.clone())
                .or_default()
                .push(entry);
        }
        for (stem, weight) in artifact.direction.iter().chain(&artifact.urgency) {
            if weight.is_some_and(|w| w.is_negative()) {
                return Err(bad(format!("cue stem {stem:?} has a negative weight")));
            }
        }
        let cue_overlap = artifact
            .direction
            .keys()
            .find(|s| artifact.urgency.contains_key(*s))
            .or_else(|| {
                actionable.keys().find(|s| {
                    artifact.direction.contains_key(*s) || artifact.urgency.contains_key(*s)
                })
            });
        if let Some(stem) = cue_overlap {
            return Err(bad(format!("stem {stem:?} is in more than one word set")));
        }
        Ok(Lexicon {
            actionable,
            direction: artifact.direction,
            urgency: artifact.urgency,
            dropped: artifact.dropped,
            wordnet_version: artifact.wordnet_version,
        })
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_artifact_json())
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let json = fs::read_to_string(path)
            .map_err(|e| LexiconError::Artifact(format!("{}: {e}", path.display())))?;
        Lexicon::from_artifact_json(&json)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Artifact {
    format: String,
    version: u32,
    #[serde(default)]
    wordnet_version: Option<String>,
    actionable: Vec<KeywordEntry>,
    direction: BTreeMap<String, Option<Rational>>,
    urgency: BTreeMap<String, Option<Rational>>,
    #[serde(default)]
    dropped: Vec<DroppedExpansion>,
}
