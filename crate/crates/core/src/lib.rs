//! Text-only phishing email detection by actionable-keyword scoring.
//!
//! Emails are reduced to plain body text, tokenized, tagged and stemmed, then
//! matched against a lexicon of actionable keywords expanded through
//! WordNet. Each match is scored as `(w + x(1 + a)) / 2^L`, where `w` is the
//! keyword weight, `x` and `a` come from direction and urgency words, and
//! `L` is the expansion level of the keyword.

pub mod corpus;
pub mod eval;
pub mod lexicon;
pub mod rational;
pub mod scoring;
pub mod text;
pub mod wordnet;

pub use rational::Rational;
