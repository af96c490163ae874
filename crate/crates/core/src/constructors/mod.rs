//! Pseudo-labeled data recipes, one per task cluster.
//!
//! Every `build_*` function is a pure function of the document, the
//! configuration and the seed. Random choices draw from a generator keyed by
//! `(seed, document id, constructor)`, so results do not depend on the order
//! in which documents are processed.

mod config;
mod exqa;
mod mcqa;
mod para;
mod paraphrase;
mod pipeline;
mod s2t;
mod sample;
mod sent;
mod sum;
mod topic;

use std::collections::BTreeSet;

use rand::seq::index;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::Document;
use crate::seed;
use crate::textkit::{pos_tag_words, split_sentences, Pos, Sentence, TaggedToken, TextKit};

pub use config::ConstructorConfig;
pub use exqa::{build_exqa, derive_cbqa, exqa_question};
pub use mcqa::{build_mcqa_cloze, build_mcqa_mined, mined_question_text};
pub use para::{build_para, ParaBuild};
pub use paraphrase::{IdentityParaphraser, ParaphraseError, Paraphraser, RoundTripTranslator, RuleParaphraser, TranslatorConfig};
pub use pipeline::{build_corpus, BuildContext, BuildOutput, BuildStats};
pub use s2t::build_s2t;
pub use sample::*;
pub use sent::{build_sent, DomainViolation};
pub use sum::{build_sum_gsg, build_sum_lsg};
pub use topic::{build_tc, collect_topic_labels, extract_topic_from_url, TopicLabels, TOPIC_LABEL_COUNT, URL_STOP_LIST};

#[derive(Debug, Error)]
pub enum ConstructorError {
    #[error("invalid constructor config: {0}")]
    Config(String),
    #[error("no URLs to collect topic labels from")]
    NoUrls,
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// A document split into sentences, each tokenized and tagged once.
#[derive(Debug, Clone)]
pub struct AnalyzedDoc<'a> {
    pub doc: &'a Document,
    pub sentences: Vec<Sentence>,
    /// Tags per sentence; offsets index into the sentence text.
    pub tagged: Vec<Vec<TaggedToken>>,
}

impl<'a> AnalyzedDoc<'a> {
    pub fn new(kit: &TextKit, doc: &'a Document) -> Self {
        let sentences = split_sentences(&doc.text);
        let tagged = sentences.iter().map(|s| kit.tag(&s.text)).collect();
        AnalyzedDoc { doc, sentences, tagged }
    }

    /// Document text from sentence `from` up to the start of sentence `to`.
    pub(crate) fn text_between(&self, from: usize, to: usize) -> &'a str {
        if from >= to {
            return "";
        }
        let start = self.sentences[from].span.0;
        let end = self.sentences[to - 1].span.1;
        &self.doc.text[start..end]
    }
}

/// Deterministic per-(document, constructor) generator.
pub(crate) fn doc_rng(seed: u64, doc: &Document, constructor: &str) -> ChaCha8Rng {
    seed::rng_for(seed, &[&doc.id, constructor])
}

/// `k` distinct indices of `0..n` in increasing order.
pub(crate) fn pick_sorted(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v = index::sample(rng, n, k.min(n)).into_vec();
    v.sort_unstable();
    v
}

/// Nouns usable as cloze answers or distractors: alphabetic, non-stopword,
/// and tagged NOUN even when seen in isolation.
pub(crate) fn is_cloze_noun(kit: &TextKit, tok: &TaggedToken) -> bool {
    tok.pos == Pos::Noun
        && tok.surface.chars().all(|c| c.is_alphabetic() || c == '-')
        && tok.surface.chars().next().is_some_and(char::is_alphabetic)
        && !kit.lexicons().is_stopword(&tok.surface)
        && pos_tag_words(kit.lexicons(), &[tok.surface.as_str()])[0].pos == Pos::Noun
}

/// Corpus-level fallback pool of cloze nouns, built before construction and
/// immutable afterwards.
#[derive(Debug, Clone, Default)]
pub struct NounPool {
    words: Vec<String>,
}

impl NounPool {
    /// Collects distinct lowercase cloze nouns from up to `max_docs` documents.
    pub fn from_documents(kit: &TextKit, docs: &[Document], max_docs: usize) -> Self {
        let mut set = BTreeSet::new();
        for doc in docs.iter().take(max_docs) {
            for s in split_sentences(&doc.text) {
                for tok in kit.tag(&s.text) {
                    if is_cloze_noun(kit, &tok) {
                        set.insert(tok.surface.to_lowercase());
                    }
                }
            }
        }
        NounPool { words: set.into_iter().collect() }
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: Into<String>>(words: I) -> Self {
        let set: BTreeSet<String> = words.into_iter().map(Into::into).collect();
        NounPool { words: set.into_iter().collect() }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}
