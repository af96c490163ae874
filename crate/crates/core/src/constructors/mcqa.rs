use rand::seq::SliceRandom;
use rand::Rng;

use super::{doc_rng, is_cloze_noun, pick_sorted, AnalyzedDoc, ConstructorConfig, McqaMethod, McqaSample, NounPool};
use crate::corpus::Document;
use crate::textkit::TextKit;

const OPEN_QUOTES: [char; 3] = ['"', '\u{201c}', '\u{2018}'];
const TRAILING: [char; 8] = ['.', '"', '\'', '\u{201d}', '\u{2019}', ')', ']', ' '];

/// Cloze questions: a noun in a non-initial sentence becomes "_", the
/// sentence gets a "?", the preceding text is the passage and the options
/// are nouns from the same document (or the corpus pool).
pub fn build_mcqa_cloze(kit: &TextKit, doc: &Document, cfg: &ConstructorConfig, pool: &NounPool, seed: u64) -> Vec<McqaSample> {
    build_mcqa_cloze_analyzed(kit, &AnalyzedDoc::new(kit, doc), cfg, pool, seed)
}

pub(crate) fn build_mcqa_cloze_analyzed(
    kit: &TextKit,
    ad: &AnalyzedDoc<'_>,
    cfg: &ConstructorConfig,
    pool: &NounPool,
    seed: u64,
) -> Vec<McqaSample> {
    let mut rng = doc_rng(seed, ad.doc, "mcqa_cloze");
    let nouns_of = |i: usize| -> Vec<usize> {
        ad.tagged[i]
            .iter()
            .enumerate()
            .filter(|(_, t)| is_cloze_noun(kit, t))
            .map(|(k, _)| k)
            .collect()
    };
    let eligible: Vec<usize> = (1..ad.sentences.len())
        .filter(|&i| !ad.sentences[i].text.contains('_') && !nouns_of(i).is_empty())
        .collect();
    let mut out = Vec::new();
    for pick in pick_sorted(&mut rng, eligible.len(), cfg.per_doc_budget) {
        let si = eligible[pick];
        let nouns = nouns_of(si);
        let tok = &ad.tagged[si][nouns[rng.gen_range(0..nouns.len())]];
        let sent = &ad.sentences[si].text;
        let answer = tok.surface.clone();
        let mut question = format!("{}_{}", &sent[..tok.start], &sent[tok.end..]);
        let trimmed = question.trim_end_matches(['.', '!', '?', ' ']).len();
        question.truncate(trimmed);
        question.push('?');

        // distractors: other nouns of the document, then the pool
        let answer_key = answer.to_lowercase();
        let mut seen = vec![answer_key.clone()];
        let mut local = Vec::new();
        for (i, tags) in ad.tagged.iter().enumerate() {
            for t in tags {
                let key = t.surface.to_lowercase();
                if !(i == si && t.start == tok.start) && !seen.contains(&key) && is_cloze_noun(kit, t) {
                    seen.push(key);
                    local.push(t.surface.clone());
                }
            }
        }
        let need = cfg.options - 1;
        let mut distractors: Vec<String> = local.choose_multiple(&mut rng, need.min(local.len())).cloned().collect();
        if distractors.len() < need {
            let extra: Vec<&String> = pool.words().iter().filter(|w| !seen.contains(&w.to_lowercase())).collect();
            let more = need - distractors.len();
            if extra.len() < more {
                continue;
            }
            distractors.extend(extra.choose_multiple(&mut rng, more).map(|w| (*w).clone()));
        }
        let answer_index = rng.gen_range(0..cfg.options);
        let mut options = distractors;
        options.insert(answer_index, answer);
        let first = si.saturating_sub(cfg.max_passage_sentences);
        out.push(McqaSample {
            passage: ad.text_between(first, si).to_string(),
            question,
            options,
            answer_index,
            method: McqaMethod::Cloze,
        });
    }
    out
}

/// The question text of a sentence that ends in "?", if any. A question in
/// quotes at the end of the sentence is taken without its lead-in.
pub fn mined_question_text(sentence: &str) -> Option<String> {
    let stripped = sentence.trim_end_matches(TRAILING);
    if !stripped.ends_with('?') {
        return None;
    }
    let question = match stripped.rfind(OPEN_QUOTES) {
        Some(q) if sentence[q..].len() > stripped[q..].len() => {
            let inner = &stripped[q + stripped[q..].chars().next().unwrap().len_utf8()..];
            inner.trim()
        }
        _ => stripped.trim(),
    };
    (question.len() > 1).then(|| question.to_string())
}

/// Questions that are followed by their answer: the passage is the text
/// before the question, the answer the next sentence, and the distractors
/// sentences after the answer.
pub fn build_mcqa_mined(kit: &TextKit, doc: &Document, cfg: &ConstructorConfig, seed: u64) -> Vec<McqaSample> {
    build_mcqa_mined_analyzed(&AnalyzedDoc::new(kit, doc), cfg, seed)
}

pub(crate) fn build_mcqa_mined_analyzed(ad: &AnalyzedDoc<'_>, cfg: &ConstructorConfig, seed: u64) -> Vec<McqaSample> {
    let mut rng = doc_rng(seed, ad.doc, "mcqa_mined");
    let n = ad.sentences.len();
    let need = cfg.options - 1;
    let mut candidates = Vec::new();
    for qi in 1..n.saturating_sub(1) {
        let Some(question) = mined_question_text(&ad.sentences[qi].text) else {
            continue;
        };
        let answer = ad.sentences[qi + 1].text.clone();
        let mut later: Vec<String> = Vec::new();
        for s in &ad.sentences[qi + 2..] {
            if s.text != answer && !later.contains(&s.text) {
                later.push(s.text.clone());
            }
        }
        if later.len() < need {
            continue;
        }
        candidates.push((qi, question, answer, later));
    }
    let mut out = Vec::new();
    for pick in pick_sorted(&mut rng, candidates.len(), cfg.per_doc_budget) {
        let (qi, question, answer, later) = &candidates[pick];
        let mut options: Vec<String> = later.choose_multiple(&mut rng, need).cloned().collect();
        let answer_index = rng.gen_range(0..cfg.options);
        options.insert(answer_index, answer.clone());
        let first = qi.saturating_sub(cfg.max_passage_sentences);
        out.push(McqaSample {
            passage: ad.text_between(first, *qi).to_string(),
            question: question.clone(),
            options,
            answer_index,
            method: McqaMethod::MinedQuestion,
        });
    }
    out
}
