//! Labeled email corpora on disk (mbox, directories of `.eml` files,
//! maildir) reduced to plain-text bodies.

mod html;
mod mbox;
mod mime;

pub use html::strip_html;
pub use mime::{extract_body, parse_message, ExtractedBody, MessageError, ParsedMessage};

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Phishing,
    Legitimate,
    Unknown,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Phishing => "phishing",
            Label::Legitimate => "legitimate",
            Label::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown label {0:?} (expected phishing, legitimate or unknown)")]
pub struct ParseLabelError(String);

impl FromStr for Label {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phishing" | "phish" => Ok(Label::Phishing),
            "legitimate" | "legit" | "ham" => Ok(Label::Legitimate),
            "unknown" => Ok(Label::Unknown),
            _ => Err(ParseLabelError(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFormat {
    Mbox,
    EmlDir,
    Maildir,
}

impl CorpusFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            CorpusFormat::Mbox => "mbox",
            CorpusFormat::EmlDir => "eml_dir",
            CorpusFormat::Maildir => "maildir",
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown corpus format {0:?} (expected mbox, eml_dir or maildir)")]
pub struct ParseFormatError(String);

impl FromStr for CorpusFormat {
    type Err = ParseFormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "mbox" => Ok(CorpusFormat::Mbox),
            "eml_dir" | "eml" => Ok(CorpusFormat::EmlDir),
            "maildir" => Ok(CorpusFormat::Maildir),
            _ => Err(ParseFormatError(s.to_string())),
        }
    }
}

/// One parsed email.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmailDocument {
    /// Unique within a corpus: the path relative to the corpus root, with
    /// `#index` appended for mbox messages.
    pub id: String,
    /// Unfolded Subject header; empty when absent.
    pub subject: String,
    /// Extracted plain text, free of markup and MIME framing.
    pub body_text: String,
    pub label: Label,
    /// File path, with `:byte_offset` for mbox messages.
    pub source: String,
    /// The message had no textual part, so `body_text` is empty.
    #[serde(default)]
    pub missing_text_part: bool,
}

impl EmailDocument {
    /// Builds a document straight from raw message bytes.
    pub fn from_bytes(
        id: impl Into<String>,
        source: impl Into<String>,
        label: Label,
        raw: &[u8],
    ) -> Result<Self, MessageError> {
        let parsed = parse_message(raw)?;
        Ok(EmailDocument {
            id: id.into(),
            subject: parsed.subject,
            body_text: parsed.body.text,
            label,
            source: source.into(),
            missing_text_part: parsed.body.missing_text_part,
        })
    }

    /// The text handed to the pipeline. With `include_subject` the subject
    /// comes first, followed by a blank line so it forms its own sentence.
    pub fn analysis_text(&self, include_subject: bool) -> String {
        if include_subject && !self.subject.is_empty() {
            format!("{}\n\n{}", self.subject, self.body_text)
        } else {
            self.body_text.clone()
        }
    }
}

/// A message that was found but could not be turned into a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedMessage {
    pub id: String,
    pub source: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<EmailDocument>,
    pub skipped: Vec<SkippedMessage>,
}

impl Corpus {
    /// Messages seen on disk: parsed plus skipped.
    pub fn encountered(&self) -> usize {
        self.documents.len() + self.skipped.len()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("corpus path {0} does not exist")]
    NotFound(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} is not a {format} corpus: {reason}")]
    Layout {
        path: PathBuf,
        format: CorpusFormat,
        reason: String,
    },
    #[error("zero messages parsed from {path} ({skipped} skipped)")]
    ZeroMessages { path: PathBuf, skipped: usize },
    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Maps corpus-relative paths to labels.
///
/// One entry per line: a path, whitespace (or a tab), then a label.
/// Blank lines and lines starting with `#` are ignored. An entry matches a
/// document whose id equals the path, or whose source file is the path (so
/// one entry can label every message of an mbox file).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: BTreeMap<String, Label>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| CorpusError::Manifest {
                line: i + 1,
                reason,
            };
            let (path, label) = line
                .rsplit_once(|c: char| c.is_whitespace())
                .ok_or_else(|| bad(format!("expected \"path label\", got {line:?}")))?;
            let label: Label = label
                .parse()
                .map_err(|e: ParseLabelError| bad(e.to_string()))?;
            let path = normalize_id(path.trim());
            if entries.insert(path.clone(), label).is_some() {
                return Err(bad(format!("duplicate entry for {path:?}")));
            }
        }
        Ok(Manifest { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = fs::read_to_string(path).map_err(io_error(path))?;
        Manifest::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Label for a document id, trying the full id and then its file part.
    pub fn label_for(&self, id: &str) -> Option<Label> {
        self.entries.get(id).copied().or_else(|| {
            let (file, _) = id.rsplit_once('#')?;
            self.entries.get(file).copied()
        })
    }
}

fn normalize_id(path: &str) -> String {
    path.replace('\\', "/").trim_start_matches("./").to_string()
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Per-message labels; messages not listed get the default label.
    pub manifest: Option<Manifest>,
}

/// Loads every message under `path`, labeling each with `label`.
pub fn load_corpus(path: &Path, format: CorpusFormat, label: Label) -> Result<Corpus, CorpusError> {
    load_corpus_with(path, format, label, &LoadOptions::default())
}

/// Loads every message under `path`. Labels come from the manifest when it
/// lists the message, else from `default_label`. Messages that fail to
/// parse are logged and returned in [`Corpus::skipped`].
pub fn load_corpus_with(
    path: &Path,
    format: CorpusFormat,
    default_label: Label,
    options: &LoadOptions,
) -> Result<Corpus, CorpusError> {
    if !path.exists() {
        return Err(CorpusError::NotFound(path.to_path_buf()));
    }
    let label_for = |id: &str| {
        options
            .manifest
            .as_ref()
            .and_then(|m| m.label_for(id))
            .unwrap_or(default_label)
    };
    let mut corpus = Corpus::default();
    let mut add = |id: String, source: String, raw: Result<Vec<u8>, String>| {
        let parsed = raw.and_then(|raw| {
            EmailDocument::from_bytes(id.clone(), source.clone(), label_for(&id), &raw)
                .map_err(|e| e.to_string())
        });
        match parsed {
            Ok(doc) => corpus.documents.push(doc),
            Err(reason) => {
                log::warn!("skipping message {id} ({source}): {reason}");
                corpus.skipped.push(SkippedMessage { id, source, reason });
            }
        }
    };

    match format {
        CorpusFormat::Mbox => {
            for (file, rel) in corpus_files(path, format)? {
                let data = fs::read(&file).map_err(io_error(&file))?;
                for chunk in mbox::split_mbox(&data) {
                    add(
                        format!("{rel}#{}", chunk.index),
                        format!("{}:{}", file.display(), chunk.offset),
                        chunk.content,
                    );
                }
            }
        }
        CorpusFormat::EmlDir | CorpusFormat::Maildir => {
            for (file, rel) in corpus_files(path, format)? {
                let raw = fs::read(&file).map_err(io_error(&file))?;
                add(rel, file.display().to_string(), Ok(raw));
            }
        }
    }

    if corpus.documents.is_empty() {
        return Err(CorpusError::ZeroMessages {
            path: path.to_path_buf(),
            skipped: corpus.skipped.len(),
        });
    }
    log::info!(
        "{}: {} messages parsed, {} skipped",
        path.display(),
        corpus.documents.len(),
        corpus.skipped.len()
    );
    Ok(corpus)
}

/// Message-bearing files with their corpus-relative ids, in sorted order.
fn corpus_files(path: &Path, format: CorpusFormat) -> Result<Vec<(PathBuf, String)>, CorpusError> {
    let layout = |reason: &str| CorpusError::Layout {
        path: path.to_path_buf(),
        format,
        reason: reason.to_string(),
    };
    match format {
        CorpusFormat::Mbox if path.is_file() => {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(vec![(path.to_path_buf(), name)])
        }
        CorpusFormat::Mbox | CorpusFormat::EmlDir => {
            if !path.is_dir() {
                return Err(layout("expected a directory"));
            }
            walk_files(path, path, true)
        }
        CorpusFormat::Maildir => {
            if !path.is_dir() {
                return Err(layout("expected a directory"));
            }
            let mut files = Vec::new();
            let mut found = false;
            for sub in ["cur", "new"] {
                let dir = path.join(sub);
                if dir.is_dir() {
                    found = true;
                    files.extend(walk_files(path, &dir, false)?);
                }
            }
            if !found {
                return Err(layout("no cur/ or new/ subdirectory"));
            }
            Ok(files)
        }
    }
}

fn walk_files(
    root: &Path,
    dir: &Path,
    recursive: bool,
) -> Result<Vec<(PathBuf, String)>, CorpusError> {
    let mut walker = WalkDir::new(dir).min_depth(1).sort_by_file_name();
    if !recursive {
        walker = walker.max_depth(1);
    }
    let mut files = Vec::new();
    for entry in walker
        .into_iter()
        .filter_entry(|e| !e.file_name().to_string_lossy().starts_with('.'))
    {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(dir).to_path_buf();
            CorpusError::Io {
                path,
                source: e.into(),
            }
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .to_string_lossy();
        files.push((entry.path().to_path_buf(), normalize_id(&rel)));
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MSG: &str = "Subject: Hi\n\nClick here.\n";

    #[test]
    fn label_and_format_round_trip() {
        for label in [Label::Phishing, Label::Legitimate, Label::Unknown] {
            assert_eq!(label.to_string().parse::<Label>().unwrap(), label);
        }
        for format in [
            CorpusFormat::Mbox,
            CorpusFormat::EmlDir,
            CorpusFormat::Maildir,
        ] {
            assert_eq!(format.to_string().parse::<CorpusFormat>().unwrap(), format);
        }
        assert!("spam".parse::<Label>().is_err());
    }

    #[test]
    fn analysis_text_prepends_subject() {
        let doc = EmailDocument::from_bytes("a", "a", Label::Unknown, MSG.as_bytes()).unwrap();
        assert_eq!(doc.analysis_text(true), "Hi\n\nClick here.\n");
        assert_eq!(doc.analysis_text(false), "Click here.\n");
    }

    #[test]
    fn manifest_parsing() {
        let m = Manifest::parse("# labels\nspam/a.eml phishing\nbox.mbox\tlegitimate\n\n").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.label_for("spam/a.eml"), Some(Label::Phishing));
        assert_eq!(m.label_for("box.mbox#3"), Some(Label::Legitimate));
        assert_eq!(m.label_for("other.eml"), None);
        assert!(matches!(
            Manifest::parse("a.eml maybe"),
            Err(CorpusError::Manifest { line: 1, .. })
        ));
        assert!(Manifest::parse("a.eml phishing\na.eml legitimate").is_err());
        assert!(Manifest::parse("lonely").is_err());
    }

    #[test]
    fn missing_path() {
        let err = load_corpus(
            Path::new("/nonexistent/corpus"),
            CorpusFormat::EmlDir,
            Label::Phishing,
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::NotFound(_)));
    }
}
