use super::{doc_rng, pick_sorted, AnalyzedDoc, CbqaSample, ClusterSample, ConstructorConfig, ExqaSample, PseudoSample};
use crate::corpus::Document;
use crate::textkit::{detect_entities, EntityKind, EntitySpan, TextKit};

fn wh_word(kind: EntityKind) -> &'static str {
    match kind {
        EntityKind::PlaceLike => "Where",
        EntityKind::PersonLike => "Who",
        EntityKind::DateLike => "When",
        EntityKind::Number => "How many",
        EntityKind::OrgLike | EntityKind::OtherProper => "What",
    }
}

/// Lowercases the first letter when the first word is an ordinary word.
fn decapitalize(kit: &TextKit, text: &str) -> String {
    let first = text.split_whitespace().next().unwrap_or("");
    let word = first.trim_matches(|c: char| !c.is_alphanumeric() && c != '-');
    let head = word.split('-').next().unwrap_or(word);
    let known = word != "I" && (kit.lexicons().pos(word).is_some() || kit.lexicons().pos(head).is_some());
    if !known {
        return text.to_string();
    }
    let mut chars = text.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Turns a sentence into a question about the answer at `answer` (byte range
/// in the sentence): the answer is deleted, the clause after it is moved in
/// front of the clause before it so the gap ends the question, and the
/// wh-word is prefixed.
pub fn exqa_question(kit: &TextKit, sentence: &str, answer: (usize, usize), kind: EntityKind) -> String {
    let before = sentence[..answer.0].trim_end_matches(|c: char| c.is_whitespace() || ",;:".contains(c));
    let before = before.trim_start_matches(['"', '\u{201c}', '(']);
    let after = sentence[answer.1..]
        .trim_start_matches(|c: char| c.is_whitespace() || ",;:".contains(c))
        .trim_end_matches(|c: char| c.is_whitespace() || ".!?\"')]\u{201d}\u{2019}".contains(c));
    let body = match (before.is_empty(), after.is_empty()) {
        (false, false) => format!("{after}, {before}"),
        (false, true) => before.to_string(),
        (true, _) => after.to_string(),
    };
    format!("{} {}?", wh_word(kind), decapitalize(kit, &body))
}

/// Extends place and organization answers over a directly preceding "the".
fn with_article(sentence: &str, e: &EntitySpan) -> (usize, usize) {
    if !matches!(e.kind, EntityKind::PlaceLike | EntityKind::OrgLike) {
        return e.span;
    }
    let head = &sentence[..e.span.0];
    match head.strip_suffix("the ") {
        Some(rest) if rest.is_empty() || rest.ends_with(' ') => (e.span.0 - 4, e.span.1),
        _ => e.span,
    }
}

/// Entity-answer questions over sentences after the first.
pub fn build_exqa(kit: &TextKit, doc: &Document, cfg: &ConstructorConfig, seed: u64) -> Vec<ExqaSample> {
    build_exqa_analyzed(kit, &AnalyzedDoc::new(kit, doc), cfg, seed)
}

pub(crate) fn build_exqa_analyzed(kit: &TextKit, ad: &AnalyzedDoc<'_>, cfg: &ConstructorConfig, seed: u64) -> Vec<ExqaSample> {
    let mut rng = doc_rng(seed, ad.doc, "exqa");
    let mut candidates = Vec::new();
    for (si, sent) in ad.sentences.iter().enumerate().skip(1) {
        for e in detect_entities(kit.lexicons(), sent, &ad.tagged[si]) {
            let span = with_article(&sent.text, &e);
            let question = exqa_question(kit, &sent.text, span, e.kind);
            let words = question.split_whitespace().count() - wh_word(e.kind).split(' ').count();
            if words >= cfg.min_question_words {
                candidates.push((si, span, question));
            }
        }
    }
    let mut out = Vec::new();
    for pick in pick_sorted(&mut rng, candidates.len(), cfg.per_doc_budget) {
        let (si, span, question) = &candidates[pick];
        let sent = &ad.sentences[*si];
        let first = (si + 1).saturating_sub(cfg.max_passage_sentences);
        let start = ad.sentences[first].span.0;
        let passage = &ad.doc.text[start..sent.span.1];
        let abs = (sent.span.0 + span.0 - start, sent.span.0 + span.1 - start);
        let char_start = passage[..abs.0].chars().count();
        let char_len = passage[abs.0..abs.1].chars().count();
        out.push(ExqaSample {
            passage: passage.to_string(),
            question: question.clone(),
            answer: passage[abs.0..abs.1].to_string(),
            answer_char_span: (char_start, char_start + char_len),
        });
    }
    out
}

/// Closed-book pairs: every EXQA sample with its passage dropped.
pub fn derive_cbqa(exqa: &[PseudoSample]) -> Vec<CbqaSample> {
    exqa.iter()
        .filter_map(|p| match &p.sample {
            ClusterSample::Exqa(e) => Some(CbqaSample {
                question: e.question.clone(),
                answer: e.answer.clone(),
                source_exqa_id: p.id.clone(),
            }),
            _ => None,
        })
        .collect()
}
