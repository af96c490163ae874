use rand::Rng;

use super::{doc_rng, pick_sorted, AnalyzedDoc, ConstructorConfig, S2tSample};
use crate::corpus::Document;
use crate::textkit::TextKit;

/// Keyword-to-text pairs: a random subset of a sentence's notional words, in
/// sentence order, as input and the sentence as output.
pub fn build_s2t(kit: &TextKit, doc: &Document, cfg: &ConstructorConfig, seed: u64) -> Vec<S2tSample> {
    build_s2t_analyzed(&AnalyzedDoc::new(kit, doc), cfg, seed)
}

pub(crate) fn build_s2t_analyzed(ad: &AnalyzedDoc<'_>, cfg: &ConstructorConfig, seed: u64) -> Vec<S2tSample> {
    let mut rng = doc_rng(seed, ad.doc, "s2t");
    let notional: Vec<Vec<String>> = ad
        .tagged
        .iter()
        .map(|tags| {
            let mut words: Vec<String> = Vec::new();
            for t in tags.iter().filter(|t| t.is_notional) {
                if !words.iter().any(|w| w.eq_ignore_ascii_case(&t.surface) || w.to_lowercase() == t.surface.to_lowercase()) {
                    words.push(t.surface.clone());
                }
            }
            words
        })
        .collect();
    let eligible: Vec<usize> = (0..ad.sentences.len()).filter(|&i| notional[i].len() >= 3).collect();
    let mut out = Vec::new();
    for pick in pick_sorted(&mut rng, eligible.len(), cfg.per_doc_budget) {
        let si = eligible[pick];
        let n = notional[si].len();
        let (lo, hi) = cfg.keyword_fraction;
        let lo_k = ((lo * n as f64).ceil() as usize).max(cfg.min_keywords).min(n);
        let hi_k = ((hi * n as f64).ceil() as usize).max(cfg.min_keywords).min(n).max(lo_k);
        let k = rng.gen_range(lo_k..=hi_k);
        let keywords = pick_sorted(&mut rng, n, k).into_iter().map(|i| notional[si][i].clone()).collect();
        out.push(S2tSample {
            keywords,
            text: ad.sentences[si].text.clone(),
        });
    }
    out
}
