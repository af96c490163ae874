use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::lexicon::Lexicons;
use super::tokenize::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Prep,
    Conj,
    Num,
    Punct,
    Other,
}

impl Pos {
    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
            Pos::Pron => "PRON",
            Pos::Det => "DET",
            Pos::Prep => "PREP",
            Pos::Conj => "CONJ",
            Pos::Num => "NUM",
            Pos::Punct => "PUNCT",
            Pos::Other => "OTHER",
        }
    }

    pub fn is_content(self) -> bool {
        matches!(self, Pos::Noun | Pos::Verb | Pos::Adj | Pos::Adv)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "NOUN" => Pos::Noun,
            "VERB" => Pos::Verb,
            "ADJ" => Pos::Adj,
            "ADV" => Pos::Adv,
            "PRON" => Pos::Pron,
            "DET" => Pos::Det,
            "PREP" => Pos::Prep,
            "CONJ" => Pos::Conj,
            "NUM" => Pos::Num,
            "PUNCT" => Pos::Punct,
            "OTHER" => Pos::Other,
            other => return Err(other.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    pub pos: Pos,
    pub is_notional: bool,
    /// Byte offsets into the tagged text.
    pub start: usize,
    pub end: usize,
}

const SUFFIXES: &[(&str, Pos)] = &[
    ("ly", Pos::Adv),
    ("tion", Pos::Noun),
    ("sion", Pos::Noun),
    ("ment", Pos::Noun),
    ("ness", Pos::Noun),
    ("ity", Pos::Noun),
    ("ism", Pos::Noun),
    ("ist", Pos::Noun),
    ("ship", Pos::Noun),
    ("hood", Pos::Noun),
    ("ance", Pos::Noun),
    ("ence", Pos::Noun),
    ("ous", Pos::Adj),
    ("ful", Pos::Adj),
    ("able", Pos::Adj),
    ("ible", Pos::Adj),
    ("ive", Pos::Adj),
    ("less", Pos::Adj),
    ("ical", Pos::Adj),
    ("ic", Pos::Adj),
    ("ing", Pos::Verb),
    ("ed", Pos::Verb),
    ("ize", Pos::Verb),
    ("ise", Pos::Verb),
    ("ify", Pos::Verb),
];

fn suffix_tag(lower: &str) -> Option<Pos> {
    if !lower.chars().all(|c| c.is_alphabetic() || c == '-') {
        return None;
    }
    let len = lower.chars().count();
    SUFFIXES
        .iter()
        .find(|(sfx, _)| len >= sfx.len() + 3 && lower.ends_with(sfx))
        .map(|(_, pos)| *pos)
}

fn is_numeric(s: &str) -> bool {
    s.chars().any(|c| c.is_ascii_digit()) && s.chars().all(|c| c.is_ascii_digit() || ",.:/-%".contains(c))
}

pub(crate) fn is_capitalized(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

/// Tags one sentence worth of tokens: lexicon, then hyphen-tail lookup
/// (content tags only),
/// then suffix rules, then NOUN for unknown capitalized non-initial words,
/// else OTHER.
pub fn pos_tag(lex: &Lexicons, tokens: &[Token]) -> Vec<TaggedToken> {
    let mut seen_word = false;
    tokens
        .iter()
        .map(|tok| {
            let surface = tok.text.as_str();
            let pos = if !surface.chars().any(char::is_alphanumeric) {
                Pos::Punct
            } else if is_numeric(surface) {
                Pos::Num
            } else {
                let lower = surface.to_lowercase();
                lex.pos(&lower)
                    .or_else(|| {
                        lower
                            .rsplit_once('-')
                            .filter(|(_, tail)| !tail.is_empty())
                            .and_then(|(_, tail)| lex.pos(tail))
                            .filter(|p| p.is_content())
                    })
                    .or_else(|| suffix_tag(&lower))
                    .unwrap_or(if seen_word && is_capitalized(surface) {
                        Pos::Noun
                    } else {
                        Pos::Other
                    })
            };
            if pos != Pos::Punct {
                seen_word = true;
            }
            let is_notional = pos.is_content()
                && surface.chars().any(char::is_alphabetic)
                && !lex.is_stopword(surface);
            TaggedToken {
                surface: surface.to_string(),
                pos,
                is_notional,
                start: tok.start,
                end: tok.end,
            }
        })
        .collect()
}

/// Convenience wrapper for bare words laid out as a single-space sentence.
pub fn pos_tag_words(lex: &Lexicons, words: &[&str]) -> Vec<TaggedToken> {
    let mut offset = 0;
    let tokens: Vec<Token> = words
        .iter()
        .map(|w| {
            let t = Token {
                text: (*w).to_string(),
                start: offset,
                end: offset + w.len(),
            };
            offset += w.len() + 1;
            t
        })
        .collect();
    pos_tag(lex, &tokens)
}
