use serde::{Deserialize, Serialize};

use super::lexicon::Lexicons;
use super::pos::pos_tag;
use super::tokenize::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "Positive",
            Polarity::Negative => "Negative",
        }
    }
}

/// Result of lexicon sentiment scoring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SentimentOutcome {
    Determinate { label: Polarity, score: f64 },
    /// `|score|` fell below the margin; callers must not emit a sample.
    Indeterminate { score: f64 },
}

impl SentimentOutcome {
    pub fn score(&self) -> f64 {
        match *self {
            SentimentOutcome::Determinate { score, .. } | SentimentOutcome::Indeterminate { score } => score,
        }
    }

    pub fn label(&self) -> Option<Polarity> {
        match *self {
            SentimentOutcome::Determinate { label, .. } => Some(label),
            SentimentOutcome::Indeterminate { .. } => None,
        }
    }
}

const NEGATORS: &[&str] = &["not", "never", "no", "n't", "n\u{2019}t"];
const NEGATION_WINDOW: usize = 3;

/// Sums lexicon weights of notional tokens. A token within three tokens after
/// a negator contributes its negated weight.
pub fn sentiment_score(lex: &Lexicons, text: &str) -> f64 {
    let tagged = pos_tag(lex, &tokenize(text));
    let mut score = 0.0;
    let mut window = 0usize;
    for tok in &tagged {
        let lower = tok.surface.to_lowercase();
        if NEGATORS.contains(&lower.as_str()) {
            window = NEGATION_WINDOW;
            continue;
        }
        if tok.is_notional {
            if let Some(w) = lex.sentiment(&lower) {
                score += if window > 0 { -w } else { w };
            }
        }
        window = window.saturating_sub(1);
    }
    score
}

pub fn sentiment_label(lex: &Lexicons, text: &str, margin: f64) -> SentimentOutcome {
    let score = sentiment_score(lex, text);
    if score >= margin {
        SentimentOutcome::Determinate {
            label: Polarity::Positive,
            score,
        }
    } else if score <= -margin {
        SentimentOutcome::Determinate {
            label: Polarity::Negative,
            score,
        }
    } else {
        SentimentOutcome::Indeterminate { score }
    }
}
