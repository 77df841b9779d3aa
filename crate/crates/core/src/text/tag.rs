//! The Penn Treebank tag inventory used by the Stanford tagger, plus a
//! dedicated tag for tokens the built-in tagger cannot classify.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

macro_rules! penn_tags {
    ($($variant:ident => $text:literal),+ $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum PennTag {
            $($variant,)+
            /// Emitted by the built-in tagger for tokens with no usable
            /// characters (non-Latin scripts, emoji, control symbols).
            Unknown,
        }

        impl PennTag {
            /// The 48 inventory tags in reference order (word tags 1–36,
            /// then punctuation and symbol tags 37–48).
            pub const INVENTORY: [PennTag; 48] = [$(PennTag::$variant,)+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(PennTag::$variant => $text,)+
                    PennTag::Unknown => "UNKNOWN",
                }
            }
        }
    };
}

penn_tags! {
    Cc => "CC",
    Cd => "CD",
    Dt => "DT",
    Ex => "EX",
    Fw => "FW",
    In => "IN",
    Jj => "JJ",
    Jjr => "JJR",
    Jjs => "JJS",
    Ls => "LS",
    Md => "MD",
    Nn => "NN",
    Nns => "NNS",
    Nnp => "NNP",
    Nnps => "NNPS",
    Pdt => "PDT",
    Pos => "POS",
    Prp => "PRP",
    PrpS => "PRP$",
    Rb => "RB",
    Rbr => "RBR",
    Rbs => "RBS",
    Rp => "RP",
    Sym => "SYM",
    To => "TO",
    Uh => "UH",
    Vb => "VB",
    Vbd => "VBD",
    Vbg => "VBG",
    Vbn => "VBN",
    Vbp => "VBP",
    Vbz => "VBZ",
    Wdt => "WDT",
    Wp => "WP",
    WpS => "WP$",
    Wrb => "WRB",
    Pound => "#",
    Dollar => "$",
    Period => ".",
    Comma => ",",
    Colon => ":",
    LeftBracket => "-LRB-",
    RightBracket => "-RRB-",
    StraightQuote => "\"",
    OpenSingleQuote => "`",
    OpenDoubleQuote => "``",
    CloseSingleQuote => "'",
    CloseDoubleQuote => "''",
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown part-of-speech tag {0:?}")]
pub struct UnknownTagError(pub String);

impl PennTag {
    /// Position in the reference inventory, 1-based. `Unknown` has none.
    pub fn number(self) -> Option<usize> {
        PennTag::INVENTORY
            .iter()
            .position(|t| *t == self)
            .map(|i| i + 1)
    }

    /// Word tags are inventory entries 1–36; punctuation, symbol and the
    /// unknown tag are excluded.
    pub fn is_word_tag(self) -> bool {
        matches!(self.number(), Some(n) if n <= 36)
    }

    pub fn is_verb(self) -> bool {
        matches!(
            self,
            PennTag::Vb | PennTag::Vbd | PennTag::Vbg | PennTag::Vbn | PennTag::Vbp | PennTag::Vbz
        )
    }

    pub fn word_tags() -> impl Iterator<Item = PennTag> {
        PennTag::INVENTORY.into_iter().filter(|t| t.is_word_tag())
    }
}

impl fmt::Display for PennTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PennTag {
    type Err = UnknownTagError;

    /// Accepts canonical spellings plus the alternates found in tagger
    /// output and tag-set listings (`PPS`, `WPS`, `(`, `)`, `;`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(tag) = PennTag::INVENTORY.iter().find(|t| t.as_str() == s) {
            return Ok(*tag);
        }
        match s {
            "UNKNOWN" => Ok(PennTag::Unknown),
            "PPS" => Ok(PennTag::PrpS),
            "WPS" => Ok(PennTag::WpS),
            "(" | "-LCB-" | "-LSB-" => Ok(PennTag::LeftBracket),
            ")" | "-RCB-" | "-RSB-" => Ok(PennTag::RightBracket),
            ";" => Ok(PennTag::Colon),
            _ => Err(UnknownTagError(s.to_string())),
        }
    }
}

impl Serialize for PennTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for PennTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
