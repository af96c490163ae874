use std::collections::HashMap;

use super::{AnalyzedDoc, SumKind, SumSample};
use crate::corpus::Document;
use crate::textkit::{notional_of, split_sentences, TextKit};

/// Title as summary, body as document. Needs a title and a body of at least
/// three sentences.
pub fn build_sum_lsg(doc: &Document) -> Option<SumSample> {
    let title = doc.title.as_deref()?.trim();
    if title.is_empty() || split_sentences(&doc.text).len() < 3 {
        return None;
    }
    Some(SumSample {
        document: doc.text.clone(),
        summary: title.to_string(),
        kind: SumKind::Lsg,
    })
}

/// The sentence with the highest notional-token F1 against the rest of the
/// document is the summary; the remaining sentences form the document.
pub fn build_sum_gsg(kit: &TextKit, doc: &Document) -> Option<SumSample> {
    build_sum_gsg_analyzed(&AnalyzedDoc::new(kit, doc))
}

pub(crate) fn build_sum_gsg_analyzed(ad: &AnalyzedDoc<'_>) -> Option<SumSample> {
    let n = ad.sentences.len();
    if n < 3 {
        return None;
    }
    let notional: Vec<Vec<String>> = ad.tagged.iter().map(|t| notional_of(t)).collect();
    let mut total: HashMap<&str, usize> = HashMap::new();
    for w in notional.iter().flatten() {
        *total.entry(w.as_str()).or_default() += 1;
    }
    let total_len: usize = notional.iter().map(Vec::len).sum();

    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, cand) in notional.iter().enumerate() {
        let score = f1_against_rest(cand, &total, total_len);
        if score > best.1 {
            best = (i, score);
        }
    }
    let pick = best.0;
    Some(SumSample {
        document: join_without(ad, pick),
        summary: ad.sentences[pick].text.clone(),
        kind: SumKind::Gsg,
    })
}

// Same arithmetic as `unigram_f1`, with the reference multiset being the
// document totals minus the candidate's own tokens.
fn f1_against_rest(cand: &[String], total: &HashMap<&str, usize>, total_len: usize) -> f64 {
    let rest_len = total_len - cand.len();
    if cand.is_empty() || rest_len == 0 {
        return 0.0;
    }
    let mut own: HashMap<&str, usize> = HashMap::new();
    for w in cand {
        *own.entry(w.as_str()).or_default() += 1;
    }
    let matches: usize = own
        .iter()
        .map(|(w, &c)| c.min(total.get(w).copied().unwrap_or(0) - c))
        .sum();
    if matches == 0 {
        return 0.0;
    }
    (2 * matches) as f64 / (cand.len() + rest_len) as f64
}

// Remaining sentences with their original gaps. Where a sentence was cut, the
// join is a paragraph break if either surrounding gap had a newline.
fn join_without(ad: &AnalyzedDoc<'_>, skip: usize) -> String {
    let text = &ad.doc.text;
    let gap = |a: usize| &text[ad.sentences[a].span.1..ad.sentences[a + 1].span.0];
    let mut out = String::new();
    let mut prev: Option<usize> = None;
    for (i, s) in ad.sentences.iter().enumerate() {
        if i == skip {
            continue;
        }
        if let Some(p) = prev {
            if p + 1 == i {
                out.push_str(gap(p));
            } else if gap(p).contains('\n') || gap(p + 1).contains('\n') {
                out.push_str("\n\n");
            } else {
                out.push(' ');
            }
        }
        out.push_str(&s.text);
        prev = Some(i);
    }
    out
}
