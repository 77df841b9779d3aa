use std::collections::HashSet;
use std::sync::OnceLock;

/// Frozen copy of the ranks.nl default English stopword list.
pub const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

/// SHA-256 of [`DEFAULT_STOPWORDS`], checked by the test suite.
pub const DEFAULT_STOPWORDS_SHA256: &str =
    "d887ee2f4614b4882fdcaee84e74a5b43255d3e4641bd22279d2894d9705d33f";

#[derive(Debug, Clone)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    /// One word per line; blank lines ignored; entries are case-folded.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect();
        StopwordList { words }
    }

    pub fn builtin() -> &'static StopwordList {
        static LIST: OnceLock<StopwordList> = OnceLock::new();
        LIST.get_or_init(|| StopwordList::parse(DEFAULT_STOPWORDS))
    }

    /// Membership test on the case-folded surface form.
    pub fn contains(&self, word: &str) -> bool {
        !word.is_empty() && self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Default for StopwordList {
    fn default() -> Self {
        StopwordList::builtin().clone()
    }
}

/// Checks the built-in list.
pub fn is_stopword(word: &str) -> bool {
    StopwordList::builtin().contains(word)
}
