//! `token<TAB>tag` exchange format, one token per line, blank line between
//! sentences. Lets any external tagger supply the tags.

use std::fmt::Write as _;

use super::stopwords::StopwordList;
use super::tag::PennTag;
use super::Token;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PretaggedError {
    #[error("line {line}: expected \"token<TAB>tag\", got {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: unknown tag {tag:?}")]
    UnknownTag { line: usize, tag: String },
}

pub fn load_pretagged(tsv: &str, stopwords: &StopwordList) -> Result<Vec<Token>, PretaggedError> {
    let mut tokens = Vec::new();
    let mut sentence_index = 0;
    let mut token_index = 0;

    for (i, raw) in tsv.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            if token_index > 0 {
                sentence_index += 1;
                token_index = 0;
            }
            continue;
        }
        let malformed = || PretaggedError::Malformed {
            line: i + 1,
            content: line.to_string(),
        };
        let (surface, tag) = line.split_once('\t').ok_or_else(malformed)?;
        if surface.is_empty() || tag.contains('\t') || surface.chars().any(char::is_whitespace) {
            return Err(malformed());
        }
        let pos = tag
            .trim()
            .parse::<PennTag>()
            .map_err(|_| PretaggedError::UnknownTag {
                line: i + 1,
                tag: tag.to_string(),
            })?;
        tokens.push(Token::new(
            surface,
            pos,
            sentence_index,
            token_index,
            stopwords,
        ));
        token_index += 1;
    }
    Ok(tokens)
}

/// Inverse of [`load_pretagged`] for tokens produced by any route.
pub fn render_pretagged(tokens: &[Token]) -> String {
    let mut out = String::new();
    let mut current = None;
    for token in tokens {
        if current.is_some_and(|s| s != token.sentence_index) {
            out.push('\n');
        }
        current = Some(token.sentence_index);
        let _ = writeln!(out, "{}\t{}", token.surface, token.pos);
    }
    out
}
