use std::thread;
use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed;
use crate::textkit::{match_case, Pos, TextKit};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParaphraseError {
    #[error("empty input")]
    Empty,
    /// Retriable backend failure after `attempts` tries.
    #[error("paraphrase backend failed after {attempts} attempt(s): {message}")]
    Backend { attempts: u32, message: String },
}

/// Meaning-preserving sentence rewrite.
pub trait Paraphraser: Send + Sync {
    fn transform(&self, sentence: &str) -> Result<String, ParaphraseError>;
}

/// Returns its input unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityParaphraser;

impl Paraphraser for IdentityParaphraser {
    fn transform(&self, sentence: &str) -> Result<String, ParaphraseError> {
        if sentence.trim().is_empty() {
            return Err(ParaphraseError::Empty);
        }
        Ok(sentence.to_string())
    }
}

const SUBORDINATORS: [&str; 9] = ["because", "although", "when", "if", "while", "since", "after", "before", "unless"];

/// Offline paraphraser: seeded adjective/adverb synonym swaps plus moving a
/// leading subordinate clause to the end. The random stream is keyed by the
/// sentence, so output does not depend on call order.
#[derive(Debug, Clone)]
pub struct RuleParaphraser {
    kit: TextKit,
    seed: u64,
    /// Chance that each eligible word is swapped.
    pub swap_rate: f64,
}

impl RuleParaphraser {
    pub fn new(kit: TextKit, seed: u64) -> Self {
        RuleParaphraser { kit, seed, swap_rate: 0.5 }
    }

    fn swap_synonyms(&self, sentence: &str) -> String {
        let mut rng = seed::rng_for(self.seed, &["rule-paraphrase", sentence]);
        let mut out = String::with_capacity(sentence.len());
        let mut last = 0;
        for tok in self.kit.tag(sentence) {
            if !matches!(tok.pos, Pos::Adj | Pos::Adv) {
                continue;
            }
            let Some(syn) = self.kit.lexicons().synonym(&tok.surface) else { continue };
            if rng.gen_bool(self.swap_rate) {
                out.push_str(&sentence[last..tok.start]);
                out.push_str(&match_case(&tok.surface, syn));
                last = tok.end;
            }
        }
        out.push_str(&sentence[last..]);
        out
    }
}

/// "Because X, Y." becomes "Y because X." when both halves are comma-free.
fn reorder_clause(sentence: &str) -> Option<String> {
    let body = sentence.trim_end_matches(['.', '!', '?']);
    let punct = &sentence[body.len()..];
    if punct.is_empty() {
        return None;
    }
    let (first, rest) = body.split_once(' ')?;
    let sub = first.to_lowercase();
    if !SUBORDINATORS.contains(&sub.as_str()) || !first.chars().next()?.is_uppercase() {
        return None;
    }
    let (clause, main) = rest.split_once(", ")?;
    if clause.contains(',') || main.contains(',') || clause.is_empty() || main.len() < 2 {
        return None;
    }
    let mut main_chars = main.chars();
    let head = main_chars.next()?;
    let main = match main.split_whitespace().next() {
        Some("I") => main.to_string(),
        _ => head.to_uppercase().chain(main_chars).collect(),
    };
    Some(format!("{main} {sub} {clause}{punct}"))
}

impl Paraphraser for RuleParaphraser {
    fn transform(&self, sentence: &str) -> Result<String, ParaphraseError> {
        if sentence.trim().is_empty() {
            return Err(ParaphraseError::Empty);
        }
        let swapped = self.swap_synonyms(sentence);
        Ok(reorder_clause(&swapped).unwrap_or(swapped))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TranslatorConfig {
    /// Base URL; requests go to `{endpoint}` directly.
    pub endpoint: String,
    pub src: String,
    pub pivot: String,
    pub retries: u32,
    pub backoff_ms: u64,
    pub timeout_ms: u64,
}

impl Default for TranslatorConfig {
    fn default() -> Self {
        TranslatorConfig {
            endpoint: "http://127.0.0.1:8090/translate".into(),
            src: "en".into(),
            pivot: "de".into(),
            retries: 3,
            backoff_ms: 200,
            timeout_ms: 10_000,
        }
    }
}

#[derive(Serialize)]
struct TranslateRequest<'a> {
    text: &'a str,
    src: &'a str,
    tgt: &'a str,
}

#[derive(Deserialize)]
struct TranslateResponse {
    text: String,
}

/// Back-translation through a pivot language over HTTP.
pub struct RoundTripTranslator {
    cfg: TranslatorConfig,
    agent: ureq::Agent,
}

impl RoundTripTranslator {
    pub fn new(cfg: TranslatorConfig) -> Self {
        let agent = ureq::AgentBuilder::new().timeout(Duration::from_millis(cfg.timeout_ms)).build();
        RoundTripTranslator { cfg, agent }
    }

    fn translate(&self, text: &str, src: &str, tgt: &str) -> Result<String, ParaphraseError> {
        let attempts = self.cfg.retries + 1;
        let mut last = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                thread::sleep(Duration::from_millis(self.cfg.backoff_ms << (attempt - 1).min(10)));
            }
            let resp = self
                .agent
                .post(&self.cfg.endpoint)
                .send_json(TranslateRequest { text, src, tgt });
            match resp {
                Ok(r) => match r.into_json::<TranslateResponse>() {
                    Ok(body) if !body.text.trim().is_empty() => return Ok(body.text),
                    Ok(_) => last = "empty translation".into(),
                    Err(e) => last = format!("bad response: {e}"),
                },
                Err(e) => last = e.to_string(),
            }
            log::debug!("translation attempt {} failed: {last}", attempt + 1);
        }
        Err(ParaphraseError::Backend { attempts, message: last })
    }
}

impl Paraphraser for RoundTripTranslator {
    fn transform(&self, sentence: &str) -> Result<String, ParaphraseError> {
        if sentence.trim().is_empty() {
            return Err(ParaphraseError::Empty);
        }
        let pivot = self.translate(sentence, &self.cfg.src, &self.cfg.pivot)?;
        self.translate(&pivot, &self.cfg.pivot, &self.cfg.src)
    }
}
