//! Reader for the Princeton WordNet dict layout (`index.<pos>` and
//! `data.<pos>` files, byte-offset addressed) and first-sense expansion of
//! verbs into synonyms and troponyms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WnPos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl WnPos {
    pub const ALL: [WnPos; 4] = [WnPos::Noun, WnPos::Verb, WnPos::Adjective, WnPos::Adverb];

    /// Suffix of the `index.*` and `data.*` file names.
    pub fn file_suffix(self) -> &'static str {
        match self {
            WnPos::Noun => "noun",
            WnPos::Verb => "verb",
            WnPos::Adjective => "adj",
            WnPos::Adverb => "adv",
        }
    }

    /// Parses the one-letter code used inside the files (`s`, an adjective
    /// satellite, counts as an adjective).
    pub fn from_code(code: &str) -> Option<WnPos> {
        match code {
            "n" => Some(WnPos::Noun),
            "v" => Some(WnPos::Verb),
            "a" | "s" => Some(WnPos::Adjective),
            "r" => Some(WnPos::Adverb),
            _ => None,
        }
    }
}

impl fmt::Display for WnPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_suffix())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pointer {
    /// Pointer symbol as written in the file, e.g. `@` or `~`.
    pub symbol: String,
    pub target_offset: u64,
    pub target_pos: WnPos,
    /// `0` for semantic pointers; otherwise source and target word numbers
    /// packed as two bytes.
    pub source_target: u16,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub offset: u64,
    pub pos: WnPos,
    /// Member lemmas in file order, lowercased, with adjective markers such
    /// as `(a)` removed. Multiword lemmas keep their underscores.
    pub lemmas: Vec<String>,
    pub pointers: Vec<Pointer>,
}

impl Synset {
    /// Synsets reached by hyponym pointers; for verbs these are troponyms.
    pub fn hyponym_offsets(&self) -> impl Iterator<Item = u64> + '_ {
        self.pointers
            .iter()
            .filter(move |p| p.symbol == "~" && p.target_pos == self.pos)
            .map(|p| p.target_offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Synonym,
    Troponym,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Synonym => "synonym",
            Relation::Troponym => "troponym",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum WordNetError {
    #[error(
        "{name} not found in {}; expected a WordNet dict directory containing index.verb and data.verb",
        dir.display()
    )]
    MissingFile { dir: PathBuf, name: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {reason}", path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{}:{line}: record declares offset {declared} but starts at byte {actual}", path.display())]
    OffsetMismatch {
        path: PathBuf,
        line: usize,
        declared: u64,
        actual: u64,
    },
    #[error("index.{pos} lists offset {offset} for {lemma:?}, which is not in data.{pos}")]
    DanglingOffset {
        pos: WnPos,
        lemma: String,
        offset: u64,
    },
    #[error(
        "{} holds no synset records; expected the WordNet dict layout (license header lines starting with two spaces, then one record per line)",
        path.display()
    )]
    UnrecognizedLayout { path: PathBuf },
}

#[derive(Debug, Clone, Default)]
struct PartOfSpeech {
    index: HashMap<String, Vec<u64>>,
    data: HashMap<u64, Synset>,
}

/// Index and data for the parts of speech that were loaded. Verbs are
/// always present; the other parts only when asked for and on disk.
#[derive(Debug, Clone)]
pub struct WordNetDb {
    parts: BTreeMap<WnPos, PartOfSpeech>,
    version: Option<String>,
}

impl WordNetDb {
    /// Loads the verb files plus any other parts of speech present.
    pub fn load(dir: &Path) -> Result<Self, WordNetError> {
        WordNetDb::load_parts(dir, &WnPos::ALL)
    }

    /// Loads the verb files plus whichever of `extra` are present.
    pub fn load_parts(dir: &Path, extra: &[WnPos]) -> Result<Self, WordNetError> {
        let mut parts = BTreeMap::new();
        let mut version = None;
        for pos in WnPos::ALL {
            let required = pos == WnPos::Verb;
            if !required && !extra.contains(&pos) {
                continue;
            }
            let index_path = dir.join(format!("index.{}", pos.file_suffix()));
            let data_path = dir.join(format!("data.{}", pos.file_suffix()));
            for path in [&index_path, &data_path] {
                if required && !path.is_file() {
                    return Err(WordNetError::MissingFile {
                        dir: dir.to_path_buf(),
                        name: path.file_name().unwrap().to_string_lossy().into_owned(),
                    });
                }
            }
            if !index_path.is_file() || !data_path.is_file() {
                continue;
            }
            let data_bytes = read(&data_path)?;
            let (data, found_version) = parse_data(&data_path, &data_bytes, pos)?;
            version = version.or(found_version);
            let index = parse_index(&index_path, &read(&index_path)?)?;
            for (lemma, offsets) in &index {
                if let Some(&offset) = offsets.iter().find(|o| !data.contains_key(o)) {
                    return Err(WordNetError::DanglingOffset {
                        pos,
                        lemma: lemma.clone(),
                        offset,
                    });
                }
            }
            log::debug!("{}: {} lemmas, {} synsets", pos, index.len(), data.len());
            parts.insert(pos, PartOfSpeech { index, data });
        }
        Ok(WordNetDb { parts, version })
    }

    /// Version named in the license header, e.g. `"3.0"`.
    pub fn version(&self) -> Option<&str> {
        self.version.as_deref()
    }

    pub fn has_pos(&self, pos: WnPos) -> bool {
        self.parts.contains_key(&pos)
    }

    /// Senses of `lemma` in file order (most frequent first). Spaces in the
    /// lemma are treated as underscores. Unknown lemmas give an empty list.
    pub fn lookup(&self, lemma: &str, pos: WnPos) -> Vec<&Synset> {
        let Some(part) = self.parts.get(&pos) else {
            return Vec::new();
        };
        let key = lemma.trim().to_lowercase().replace(' ', "_");
        part.index
            .get(&key)
            .map(|offsets| offsets.iter().map(|o| &part.data[o]).collect())
            .unwrap_or_default()
    }

    pub fn synset(&self, pos: WnPos, offset: u64) -> Option<&Synset> {
        self.parts.get(&pos)?.data.get(&offset)
    }

    /// Number of lemmas in the index for `pos`.
    pub fn lemma_count(&self, pos: WnPos) -> usize {
        self.parts.get(&pos).map_or(0, |p| p.index.len())
    }

    /// Synonyms (other members of the first verb sense) and troponyms
    /// (members of synsets one hyponym pointer away from that sense).
    /// Multiword lemmas and `word` itself are left out. A word without a
    /// verb sense gives an empty set.
    pub fn first_sense_expansion(&self, word: &str) -> BTreeSet<(String, Relation)> {
        let mut out = BTreeSet::new();
        let Some(first) = self.lookup(word, WnPos::Verb).into_iter().next() else {
            return out;
        };
        let word = word.trim().to_lowercase().replace(' ', "_");
        let mut add = |lemma: &str, relation| {
            if lemma != word && !lemma.contains('_') {
                out.insert((lemma.to_string(), relation));
            }
        };
        for lemma in &first.lemmas {
            add(lemma, Relation::Synonym);
        }
        for offset in first.hyponym_offsets() {
            if let Some(target) = self.synset(WnPos::Verb, offset) {
                for lemma in &target.lemmas {
                    add(lemma, Relation::Troponym);
                }
            }
        }
        out
    }
}

/// Loads a dict directory; see [`WordNetDb::load`].
pub fn load_wordnet(dir: &Path) -> Result<WordNetDb, WordNetError> {
    WordNetDb::load(dir)
}

/// See [`WordNetDb::first_sense_expansion`].
pub fn first_sense_expansion(word: &str, db: &WordNetDb) -> BTreeSet<(String, Relation)> {
    db.first_sense_expansion(word)
}

fn read(path: &Path) -> Result<Vec<u8>, WordNetError> {
    fs::read(path).map_err(|source| WordNetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Lines with their starting byte offsets and 1-based numbers, skipping the
/// license header (lines that start with two spaces).
fn records(bytes: &[u8]) -> impl Iterator<Item = (usize, u64, &str)> {
    let mut offset = 0u64;
    bytes
        .split_inclusive(|&b| b == b'\n')
        .enumerate()
        .filter_map(move |(i, raw)| {
            let start = offset;
            offset += raw.len() as u64;
            let line = std::str::from_utf8(raw)
                .unwrap_or("")
                .trim_end_matches(['\n', '\r']);
            if raw.starts_with(b"  ") || line.trim().is_empty() {
                None
            } else {
                Some((i + 1, start, line))
            }
        })
}

fn sniff_version(bytes: &[u8]) -> Option<String> {
    let header = bytes
        .split(|&b| b == b'\n')
        .take_while(|l| l.starts_with(b"  "))
        .map(String::from_utf8_lossy);
    for line in header {
        let mut words = line.split_whitespace();
        while let Some(w) = words.next() {
            if w == "WordNet" {
                if let Some(v) = words.next() {
                    if v.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                        return Some(v.to_string());
                    }
                }
            }
        }
    }
    None
}

fn normalize_lemma(raw: &str) -> String {
    let lemma = match raw.find('(') {
        Some(p) if raw.ends_with(')') => &raw[..p],
        _ => raw,
    };
    lemma.to_lowercase()
}

fn parse_data(
    path: &Path,
    bytes: &[u8],
    pos: WnPos,
) -> Result<(HashMap<u64, Synset>, Option<String>), WordNetError> {
    let mut data = HashMap::new();
    for (line_no, start, line) in records(bytes) {
        let malformed = |reason: &str| WordNetError::Malformed {
            path: path.to_path_buf(),
            line: line_no,
            reason: reason.to_string(),
        };
        let fields = line.split(" | ").next().unwrap_or(line);
        let mut tok = fields.split_ascii_whitespace();
        let mut next = |what: &str| {
            tok.next()
                .ok_or_else(|| malformed(&format!("missing {what}")))
        };

        let offset: u64 = next("offset")?
            .parse()
            .map_err(|_| malformed("offset is not a number"))?;
        if offset != start {
            return Err(WordNetError::OffsetMismatch {
                path: path.to_path_buf(),
                line: line_no,
                declared: offset,
                actual: start,
            });
        }
        next("lex_filenum")?;
        let ss_type = next("ss_type")?;
        if WnPos::from_code(ss_type) != Some(pos) {
            return Err(malformed(&format!("synset type {ss_type:?} in data.{pos}")));
        }
        let w_cnt = usize::from_str_radix(next("w_cnt")?, 16)
            .map_err(|_| malformed("w_cnt is not hexadecimal"))?;
        let mut lemmas = Vec::with_capacity(w_cnt);
        for _ in 0..w_cnt {
            lemmas.push(normalize_lemma(next("word")?));
            next("lex_id")?;
        }
        let p_cnt: usize = next("p_cnt")?
            .parse()
            .map_err(|_| malformed("p_cnt is not a number"))?;
        let mut pointers = Vec::with_capacity(p_cnt);
        for _ in 0..p_cnt {
            let symbol = next("pointer symbol")?.to_string();
            let target_offset = next("pointer offset")?
                .parse()
                .map_err(|_| malformed("pointer offset is not a number"))?;
            let target_pos = WnPos::from_code(next("pointer pos")?)
                .ok_or_else(|| malformed("unknown pointer part of speech"))?;
            let source_target = u16::from_str_radix(next("source/target")?, 16)
                .map_err(|_| malformed("source/target is not hexadecimal"))?;
            pointers.push(Pointer {
                symbol,
                target_offset,
                target_pos,
                source_target,
            });
        }
        data.insert(
            offset,
            Synset {
                offset,
                pos,
                lemmas,
                pointers,
            },
        );
    }
    if data.is_empty() {
        return Err(WordNetError::UnrecognizedLayout {
            path: path.to_path_buf(),
        });
    }
    Ok((data, sniff_version(bytes)))
}

fn parse_index(path: &Path, bytes: &[u8]) -> Result<HashMap<String, Vec<u64>>, WordNetError> {
    let mut index = HashMap::new();
    for (line_no, _, line) in records(bytes) {
        let malformed = |reason: String| WordNetError::Malformed {
            path: path.to_path_buf(),
            line: line_no,
            reason,
        };
        let tok: Vec<&str> = line.split_ascii_whitespace().collect();
        let number = |i: usize, what: &str| -> Result<usize, WordNetError> {
            tok.get(i)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| malformed(format!("bad or missing {what}")))
        };
        let synset_cnt = number(2, "synset_cnt")?;
        let p_cnt = number(3, "p_cnt")?;
        // lemma pos synset_cnt p_cnt [ptr_symbol]{p_cnt} sense_cnt tagsense_cnt offsets
        let first_offset = 4 + p_cnt + 2;
        if tok.len() != first_offset + synset_cnt {
            return Err(malformed(format!(
                "expected {} fields, found {}",
                first_offset + synset_cnt,
                tok.len()
            )));
        }
        let offsets = tok[first_offset..]
            .iter()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| malformed(format!("bad offset {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        index.insert(tok[0].to_lowercase(), offsets);
    }
    Ok(index)
}
