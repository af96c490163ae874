//! Lexicon- and rule-based text analysis shared by every constructor.
//!
//! All routines are pure over an immutable [`Lexicons`] value and are safe to
//! call from any number of threads.

mod entity;
mod lexicon;
mod overlap;
mod pos;
mod sentence;
mod sentiment;
mod tokenize;

use std::sync::Arc;

pub use entity::{detect_entities, EntityKind, EntitySpan};
pub use lexicon::{LexiconError, LexiconPaths, Lexicons, BUNDLED_LEXICON_VERSION};
pub use overlap::{lcs_length, unigram_f1};
pub use pos::{pos_tag, pos_tag_words, Pos, TaggedToken};
pub use sentence::{split_sentences, Sentence};
pub use sentiment::{sentiment_label, sentiment_score, Polarity, SentimentOutcome};
pub use tokenize::{tokenize, words_lower, Token};

/// Default sentiment margin.
pub const DEFAULT_SENTIMENT_MARGIN: f64 = 1.0;

/// Lexicons plus the analysis entry points that need them.
#[derive(Debug, Clone)]
pub struct TextKit {
    lexicons: Arc<Lexicons>,
}

impl Default for TextKit {
    fn default() -> Self {
        TextKit::new(Lexicons::bundled())
    }
}

impl TextKit {
    pub fn new(lexicons: Arc<Lexicons>) -> Self {
        TextKit { lexicons }
    }

    pub fn lexicons(&self) -> &Lexicons {
        &self.lexicons
    }

    /// Tokenizes and tags `text` as one sentence.
    pub fn tag(&self, text: &str) -> Vec<TaggedToken> {
        pos_tag(&self.lexicons, &tokenize(text))
    }

    pub fn entities(&self, sentence: &Sentence) -> Vec<EntitySpan> {
        let tagged = self.tag(&sentence.text);
        detect_entities(&self.lexicons, sentence, &tagged)
    }

    pub fn sentiment(&self, text: &str, margin: f64) -> SentimentOutcome {
        sentiment_label(&self.lexicons, text, margin)
    }

    /// Antonym with the first letter's case carried over.
    pub fn antonym(&self, word: &str) -> Option<String> {
        let ant = self.lexicons.antonym(word)?;
        Some(match_case(word, ant))
    }

    /// Lowercased notional tokens of `text`.
    pub fn notional(&self, text: &str) -> Vec<String> {
        notional_of(&self.tag(text))
    }

    /// Unigram F1 of the candidate's notional tokens against the pooled
    /// notional tokens of `rest`.
    pub fn overlap_score(&self, candidate: &Sentence, rest: &[Sentence]) -> f64 {
        let cand = self.notional(&candidate.text);
        let pool: Vec<String> = rest.iter().flat_map(|s| self.notional(&s.text)).collect();
        unigram_f1(&cand, &pool)
    }
}

pub fn notional_of(tagged: &[TaggedToken]) -> Vec<String> {
    tagged.iter().filter(|t| t.is_notional).map(|t| t.surface.to_lowercase()).collect()
}

/// Copies the case of `template`'s first letter onto `word`.
pub fn match_case(template: &str, word: &str) -> String {
    let upper = template.chars().next().is_some_and(char::is_uppercase);
    let mut chars = word.chars();
    match chars.next() {
        Some(first) if upper => first.to_uppercase().chain(chars).collect(),
        _ => word.to_string(),
    }
}
