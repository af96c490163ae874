use serde::{Deserialize, Serialize};

use super::ConstructorError;

/// Knobs for the pseudo-data recipes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstructorConfig {
    /// Options per multiple-choice question.
    pub options: usize,
    /// Passage length limit, in sentences, for MCQA and EXQA.
    pub max_passage_sentences: usize,
    /// Minimum number of words in a generated question (wh-word excluded).
    pub min_question_words: usize,
    /// Keyword subset size as a fraction of a sentence's notional words.
    pub keyword_fraction: (f64, f64),
    pub min_keywords: usize,
    pub sentiment_margin: f64,
    /// Share of PARA perturbations that use antonyms rather than noun shuffles.
    pub antonym_share: f64,
    /// Token-length window for PARA source sentences.
    pub para_tokens: (usize, usize),
    pub shuffle_retries: usize,
    /// Samples per constructor per document.
    pub per_doc_budget: usize,
    pub seed: u64,
}

impl Default for ConstructorConfig {
    fn default() -> Self {
        ConstructorConfig {
            options: 4,
            max_passage_sentences: 12,
            min_question_words: 3,
            keyword_fraction: (0.3, 0.6),
            min_keywords: 2,
            sentiment_margin: crate::textkit::DEFAULT_SENTIMENT_MARGIN,
            antonym_share: 0.5,
            para_tokens: (6, 40),
            shuffle_retries: 16,
            per_doc_budget: 4,
            seed: 0,
        }
    }
}

impl ConstructorConfig {
    pub fn validate(&self) -> Result<(), ConstructorError> {
        let bad = |m: &str| Err(ConstructorError::Config(m.to_string()));
        if !(2..=8).contains(&self.options) {
            return bad("options must be within 2..=8");
        }
        if self.max_passage_sentences == 0 || self.min_question_words == 0 || self.min_keywords == 0 {
            return bad("counts must be positive");
        }
        if self.per_doc_budget == 0 || self.shuffle_retries == 0 {
            return bad("counts must be positive");
        }
        let (lo, hi) = self.keyword_fraction;
        if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
            return bad("keyword_fraction must satisfy 0 < lo <= hi <= 1");
        }
        if !(0.0..=1.0).contains(&self.antonym_share) {
            return bad("antonym_share must be within [0, 1]");
        }
        if !(self.sentiment_margin > 0.0 && self.sentiment_margin.is_finite()) {
            return bad("sentiment_margin must be positive");
        }
        if self.para_tokens.0 == 0 || self.para_tokens.0 > self.para_tokens.1 {
            return bad("para_tokens must be a non-empty range");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ConstructorConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        for cfg in [
            ConstructorConfig { options: 1, ..Default::default() },
            ConstructorConfig { options: 9, ..Default::default() },
            ConstructorConfig { keyword_fraction: (0.0, 0.5), ..Default::default() },
            ConstructorConfig { keyword_fraction: (0.5, 1.2), ..Default::default() },
            ConstructorConfig { per_doc_budget: 0, ..Default::default() },
        ] {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }
}
