use std::collections::HashSet;

use super::{ScorerBackend, ScorerError};
use crate::seed;
use crate::textkit::words_lower;

/// Score given to an empty target.
pub const EMPTY_TARGET_SCORE: f64 = -1.0e6;

const HIT: f64 = 0.9;
const MISS: f64 = 0.1;

/// Offline scorer: mean log-probability of target tokens under a model that
/// assigns 0.9 to tokens seen in the input and 0.1 otherwise.
#[derive(Debug, Clone, Default)]
pub struct DummyScorer {
    /// Adds a deterministic offset below 1e-9 keyed by (seed, input, target).
    pub jitter_seed: Option<u64>,
    /// Words returned by `generate`.
    pub generate_words: usize,
}

impl DummyScorer {
    pub fn new() -> Self {
        DummyScorer { jitter_seed: None, generate_words: 20 }
    }

    pub fn with_jitter(seed: u64) -> Self {
        DummyScorer { jitter_seed: Some(seed), ..Self::new() }
    }
}

/// The dummy log-overlap score without jitter.
pub fn dummy_score(input: &str, target: &str) -> f64 {
    let target = words_lower(target);
    if target.is_empty() {
        return EMPTY_TARGET_SCORE;
    }
    let seen: HashSet<String> = words_lower(input).into_iter().collect();
    let total: f64 = target.iter().map(|w| if seen.contains(w) { HIT.ln() } else { MISS.ln() }).sum();
    total / target.len() as f64
}

impl ScorerBackend for DummyScorer {
    fn score(&self, input: &str, target: &str) -> Result<f64, ScorerError> {
        let base = dummy_score(input, target);
        Ok(match self.jitter_seed {
            Some(s) => {
                let h = seed::derive(s, &["dummy-jitter", input, target]);
                base + (h >> 11) as f64 / (1u64 << 53) as f64 * 1e-10
            }
            None => base,
        })
    }

    /// The first `generate_words` words of the input.
    fn generate(&self, input: &str) -> Result<String, ScorerError> {
        Ok(input.split_whitespace().take(self.generate_words.max(1)).collect::<Vec<_>>().join(" "))
    }
}
