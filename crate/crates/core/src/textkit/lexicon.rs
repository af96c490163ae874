use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::pos::Pos;

const POS_TSV: &str = include_str!("../../data/pos_lexicon.tsv");
const SENTIMENT_TSV: &str = include_str!("../../data/sentiment_lexicon.tsv");
const ANTONYMS_TSV: &str = include_str!("../../data/antonyms.tsv");
const SYNONYMS_TSV: &str = include_str!("../../data/synonyms.tsv");
const STOPWORDS_TSV: &str = include_str!("../../data/stopwords.tsv");

/// Version stamp of the bundled lexicon files.
pub const BUNDLED_LEXICON_VERSION: &str = "2026.10-1";

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
}

/// Optional overrides for the bundled lexicon files.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LexiconPaths {
    pub pos: Option<PathBuf>,
    pub sentiment: Option<PathBuf>,
    pub antonyms: Option<PathBuf>,
    pub synonyms: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
}

/// Immutable word lists shared by every analysis routine. Keys are lowercase
/// and every lookup lowercases its argument.
#[derive(Debug, Clone, Default)]
pub struct Lexicons {
    pos: HashMap<String, Pos>,
    sentiment: HashMap<String, f64>,
    antonyms: HashMap<String, String>,
    synonyms: HashMap<String, String>,
    stopwords: HashSet<String>,
}

fn rows<'a>(file: &'a str, content: &'a str) -> impl Iterator<Item = Result<(usize, &'a str, &'a str), LexiconError>> + 'a {
    content.lines().enumerate().filter_map(move |(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            return None;
        }
        Some(match line.split_once('\t') {
            Some((k, v)) => Ok((i + 1, k.trim(), v.trim())),
            None => Err(LexiconError::Parse {
                file: file.to_string(),
                line: i + 1,
                message: "expected word<TAB>value".to_string(),
            }),
        })
    })
}

fn parse_pos(file: &str, content: &str) -> Result<HashMap<String, Pos>, LexiconError> {
    rows(file, content)
        .map(|r| {
            let (line, k, v) = r?;
            let pos = v.parse::<Pos>().map_err(|_| LexiconError::Parse {
                file: file.to_string(),
                line,
                message: format!("unknown tag {v:?}"),
            })?;
            Ok((k.to_lowercase(), pos))
        })
        .collect()
}

fn parse_sentiment(file: &str, content: &str) -> Result<HashMap<String, f64>, LexiconError> {
    rows(file, content)
        .map(|r| {
            let (line, k, v) = r?;
            let w: f64 = v.parse().map_err(|_| LexiconError::Parse {
                file: file.to_string(),
                line,
                message: format!("bad weight {v:?}"),
            })?;
            if !(-1.0..=1.0).contains(&w) {
                return Err(LexiconError::Parse {
                    file: file.to_string(),
                    line,
                    message: format!("weight {w} outside [-1, 1]"),
                });
            }
            Ok((k.to_lowercase(), w))
        })
        .collect()
}

fn parse_pairs(file: &str, content: &str) -> Result<HashMap<String, String>, LexiconError> {
    let mut out = HashMap::new();
    for r in rows(file, content) {
        let (_, k, v) = r?;
        let (k, v) = (k.to_lowercase(), v.to_lowercase());
        if k != v && !v.is_empty() {
            out.insert(k, v);
        }
    }
    Ok(out)
}

fn parse_set(file: &str, content: &str) -> Result<HashSet<String>, LexiconError> {
    content
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let word = l.split('\t').next().unwrap_or("").trim();
            if word.is_empty() {
                Err(LexiconError::Parse {
                    file: file.to_string(),
                    line: i + 1,
                    message: "empty word".to_string(),
                })
            } else {
                Ok(word.to_lowercase())
            }
        })
        .collect()
}

fn read(path: &Path) -> Result<String, LexiconError> {
    std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl Lexicons {
    /// The bundled lexicons, parsed once per process.
    pub fn bundled() -> Arc<Lexicons> {
        static BUNDLED: OnceLock<Arc<Lexicons>> = OnceLock::new();
        BUNDLED
            .get_or_init(|| {
                Arc::new(Lexicons {
                    pos: parse_pos("pos_lexicon.tsv", POS_TSV).expect("bundled POS lexicon"),
                    sentiment: parse_sentiment("sentiment_lexicon.tsv", SENTIMENT_TSV)
                        .expect("bundled sentiment lexicon"),
                    antonyms: parse_pairs("antonyms.tsv", ANTONYMS_TSV).expect("bundled antonyms"),
                    synonyms: parse_pairs("synonyms.tsv", SYNONYMS_TSV).expect("bundled synonyms"),
                    stopwords: parse_set("stopwords.tsv", STOPWORDS_TSV).expect("bundled stopwords"),
                })
            })
            .clone()
    }

    /// Loads lexicons, falling back to the bundled file for each path left unset.
    pub fn load(paths: &LexiconPaths) -> Result<Lexicons, LexiconError> {
        let bundled = Self::bundled();
        let mut lex = (*bundled).clone();
        if let Some(p) = &paths.pos {
            lex.pos = parse_pos(&p.display().to_string(), &read(p)?)?;
        }
        if let Some(p) = &paths.sentiment {
            lex.sentiment = parse_sentiment(&p.display().to_string(), &read(p)?)?;
        }
        if let Some(p) = &paths.antonyms {
            lex.antonyms = parse_pairs(&p.display().to_string(), &read(p)?)?;
        }
        if let Some(p) = &paths.synonyms {
            lex.synonyms = parse_pairs(&p.display().to_string(), &read(p)?)?;
        }
        if let Some(p) = &paths.stopwords {
            lex.stopwords = parse_set(&p.display().to_string(), &read(p)?)?;
        }
        Ok(lex)
    }

    /// Builds lexicons from in-memory TSV strings (fixtures, tests).
    pub fn from_tsv(pos: &str, sentiment: &str, antonyms: &str, stopwords: &str) -> Result<Lexicons, LexiconError> {
        Ok(Lexicons {
            pos: parse_pos("pos", pos)?,
            sentiment: parse_sentiment("sentiment", sentiment)?,
            antonyms: parse_pairs("antonyms", antonyms)?,
            synonyms: HashMap::new(),
            stopwords: parse_set("stopwords", stopwords)?,
        })
    }

    pub fn with_synonyms(mut self, tsv: &str) -> Result<Lexicons, LexiconError> {
        self.synonyms = parse_pairs("synonyms", tsv)?;
        Ok(self)
    }

    pub fn pos(&self, word: &str) -> Option<Pos> {
        self.pos.get(&word.to_lowercase()).copied()
    }

    pub fn sentiment(&self, word: &str) -> Option<f64> {
        self.sentiment.get(&word.to_lowercase()).copied()
    }

    /// Raw lowercase antonym entry.
    pub fn antonym(&self, word: &str) -> Option<&str> {
        self.antonyms.get(&word.to_lowercase()).map(String::as_str)
    }

    pub fn synonym(&self, word: &str) -> Option<&str> {
        self.synonyms.get(&word.to_lowercase()).map(String::as_str)
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(&word.to_lowercase())
    }

    pub fn sizes(&self) -> [(&'static str, usize); 5] {
        [
            ("pos", self.pos.len()),
            ("sentiment", self.sentiment.len()),
            ("antonyms", self.antonyms.len()),
            ("synonyms", self.synonyms.len()),
            ("stopwords", self.stopwords.len()),
        ]
    }
}
