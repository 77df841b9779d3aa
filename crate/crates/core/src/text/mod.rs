//! Body text to tagged, stemmed, stopword-flagged tokens.

mod porter;
mod pretagged;
mod sentence;
mod stopwords;
mod tag;
mod tagger;
mod tokenize;

pub use porter::porter_stem;
pub use pretagged::{load_pretagged, render_pretagged, PretaggedError};
pub use sentence::split_sentences;
pub use stopwords::{is_stopword, StopwordList, DEFAULT_STOPWORDS, DEFAULT_STOPWORDS_SHA256};
pub use tag::{PennTag, UnknownTagError};
pub use tagger::{
    tag_pos, LexiconTags, SuffixRule, TaggerLexiconError, TaggerModel, BUILTIN_TAGGER_LEXICON,
};
pub use tokenize::tokenize;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    /// Always `porter_stem(lower)`.
    pub stem: String,
    pub pos: PennTag,
    pub sentence_index: usize,
    /// Position within the sentence.
    pub token_index: usize,
    pub is_stopword: bool,
}

impl Token {
    pub fn new(
        surface: &str,
        pos: PennTag,
        sentence_index: usize,
        token_index: usize,
        stopwords: &StopwordList,
    ) -> Self {
        let lower = surface.to_lowercase();
        let stem = porter_stem(&lower);
        let is_stopword = stopwords.contains(&lower);
        Token {
            surface: surface.to_string(),
            lower,
            stem,
            pos,
            sentence_index,
            token_index,
            is_stopword,
        }
    }
}

/// Sentence splitting, tokenization, tagging and stemming behind one
/// immutable value.
#[derive(Debug, Clone, Default)]
pub struct TextPipeline {
    tagger: TaggerModel,
    stopwords: StopwordList,
}

impl TextPipeline {
    pub fn new(tagger: TaggerModel, stopwords: StopwordList) -> Self {
        TextPipeline { tagger, stopwords }
    }

    pub fn tagger(&self) -> &TaggerModel {
        &self.tagger
    }

    pub fn stopwords(&self) -> &StopwordList {
        &self.stopwords
    }

    /// Surface tokens per sentence, before tagging.
    pub fn sentences(&self, text: &str) -> Vec<Vec<String>> {
        split_sentences(text)
            .into_iter()
            .map(|span| tokenize(&text[span]))
            .filter(|tokens| !tokens.is_empty())
            .collect()
    }

    pub fn analyze(&self, text: &str) -> Vec<Token> {
        let mut tokens = Vec::new();
        for (sentence_index, surfaces) in self.sentences(text).into_iter().enumerate() {
            let tags = self.tagger.tag(&surfaces);
            debug_assert_eq!(tags.len(), surfaces.len());
            for (token_index, (surface, pos)) in surfaces.iter().zip(tags).enumerate() {
                tokens.push(Token::new(
                    surface,
                    pos,
                    sentence_index,
                    token_index,
                    &self.stopwords,
                ));
            }
        }
        tokens
    }

    /// Builds tokens from externally supplied tags.
    pub fn load_pretagged(&self, tsv: &str) -> Result<Vec<Token>, PretaggedError> {
        load_pretagged(tsv, &self.stopwords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_assigns_positions_and_stems() {
        let pipeline = TextPipeline::default();
        let tokens = pipeline.analyze("Dear user,\n\nClick here to update your accounts.");
        let first_click = tokens.iter().find(|t| t.lower == "click").unwrap();
        assert_eq!(first_click.sentence_index, 1);
        assert_eq!(first_click.token_index, 0);
        assert_eq!(first_click.pos, PennTag::Vb);
        let accounts = tokens.iter().find(|t| t.lower == "accounts").unwrap();
        assert_eq!(accounts.stem, "account");
        let here = tokens.iter().find(|t| t.lower == "here").unwrap();
        assert!(here.is_stopword);
        assert!(!first_click.is_stopword);
    }

    #[test]
    fn analyze_is_deterministic() {
        let pipeline = TextPipeline::default();
        let text = "Your account expires soon. Please verify now!\n\nThanks";
        assert_eq!(pipeline.analyze(text), pipeline.analyze(text));
    }

    #[test]
    fn empty_text_has_no_tokens() {
        assert!(TextPipeline::default().analyze("").is_empty());
    }
}
