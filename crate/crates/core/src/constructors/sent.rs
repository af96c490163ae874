use thiserror::Error;

use super::{ConstructorConfig, SentSample};
use crate::corpus::{Document, Domain};
use crate::textkit::{SentimentOutcome, TextKit};

/// SENT only accepts review documents.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("document {doc_id} has domain {domain}, SENT accepts reviews only")]
pub struct DomainViolation {
    pub doc_id: String,
    pub domain: Domain,
}

/// Labels a review by lexicon sentiment. `Ok(None)` when the score is inside
/// the margin.
pub fn build_sent(kit: &TextKit, doc: &Document, cfg: &ConstructorConfig) -> Result<Option<SentSample>, DomainViolation> {
    if doc.domain != Domain::Reviews {
        return Err(DomainViolation {
            doc_id: doc.id.clone(),
            domain: doc.domain,
        });
    }
    Ok(match kit.sentiment(&doc.text, cfg.sentiment_margin) {
        SentimentOutcome::Determinate { label, score } => Some(SentSample {
            text: doc.text.clone(),
            label,
            score,
        }),
        SentimentOutcome::Indeterminate { .. } => None,
    })
}
