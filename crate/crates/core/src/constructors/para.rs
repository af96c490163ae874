use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{doc_rng, pick_sorted, AnalyzedDoc, ConstructorConfig, ParaLabel, ParaSample, Paraphraser, Perturbation};
use crate::corpus::Document;
use crate::textkit::{match_case, Pos, TaggedToken, TextKit};

/// PARA output plus the number of sentences dropped because the paraphraser
/// failed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParaBuild {
    pub samples: Vec<ParaSample>,
    pub paraphrase_failures: usize,
}

/// Positive pair (s, paraphrase(s)) and negative pair
/// (s, paraphrase(perturbed s)) per selected sentence.
pub fn build_para(kit: &TextKit, doc: &Document, paraphraser: &dyn Paraphraser, cfg: &ConstructorConfig, seed: u64) -> ParaBuild {
    build_para_analyzed(kit, &AnalyzedDoc::new(kit, doc), paraphraser, cfg, seed)
}

fn is_word(t: &TaggedToken) -> bool {
    t.surface.chars().next().is_some_and(char::is_alphabetic) && t.surface.chars().all(|c| c.is_alphabetic() || c == '-')
}

fn antonym_sites(kit: &TextKit, tagged: &[TaggedToken]) -> Vec<usize> {
    (0..tagged.len())
        .filter(|&i| is_word(&tagged[i]) && !kit.lexicons().is_stopword(&tagged[i].surface) && kit.antonym(&tagged[i].surface).is_some())
        .collect()
}

fn noun_sites(tagged: &[TaggedToken]) -> Vec<usize> {
    let sites: Vec<usize> = (0..tagged.len()).filter(|&i| tagged[i].pos == Pos::Noun && is_word(&tagged[i])).collect();
    let first = sites.first().map(|&i| tagged[i].surface.to_lowercase());
    let distinct = sites.iter().any(|&i| Some(tagged[i].surface.to_lowercase()) != first);
    if distinct {
        sites
    } else {
        Vec::new()
    }
}

fn splice(sentence: &str, tagged: &[TaggedToken], replacements: &[(usize, String)]) -> String {
    let mut out = String::with_capacity(sentence.len() + 16);
    let mut last = 0;
    for (i, word) in replacements {
        out.push_str(&sentence[last..tagged[*i].start]);
        out.push_str(word);
        last = tagged[*i].end;
    }
    out.push_str(&sentence[last..]);
    out
}

fn perturb_antonym(kit: &TextKit, sentence: &str, tagged: &[TaggedToken], sites: &[usize], rng: &mut ChaCha8Rng) -> String {
    let i = *sites.choose(rng).expect("non-empty sites");
    let ant = kit.antonym(&tagged[i].surface).expect("site has an antonym");
    splice(sentence, tagged, &[(i, ant)])
}

// Shuffles noun surfaces until no noun stays in place and the sentence
// changes. Gives up after `retries` attempts.
fn perturb_shuffle(sentence: &str, tagged: &[TaggedToken], sites: &[usize], retries: usize, rng: &mut ChaCha8Rng) -> Option<String> {
    let words: Vec<&str> = sites.iter().map(|&i| tagged[i].surface.as_str()).collect();
    let mut order: Vec<usize> = (0..sites.len()).collect();
    for _ in 0..retries {
        order.shuffle(rng);
        if order.iter().enumerate().any(|(k, &o)| k == o) {
            continue;
        }
        let replacements: Vec<(usize, String)> = sites
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let incoming = words[order[k]];
                let word = if tagged[i].start == 0 {
                    match_case(words[k], incoming)
                } else if tagged[sites[order[k]]].start == 0 && incoming.chars().skip(1).all(char::is_lowercase) {
                    incoming.to_lowercase()
                } else {
                    incoming.to_string()
                };
                (i, word)
            })
            .collect();
        let out = splice(sentence, tagged, &replacements);
        if out != sentence {
            return Some(out);
        }
    }
    None
}

pub(crate) fn build_para_analyzed(
    kit: &TextKit,
    ad: &AnalyzedDoc<'_>,
    paraphraser: &dyn Paraphraser,
    cfg: &ConstructorConfig,
    seed: u64,
) -> ParaBuild {
    let mut rng = doc_rng(seed, ad.doc, "para");
    let (lo, hi) = cfg.para_tokens;
    let candidates: Vec<(usize, Vec<usize>, Vec<usize>)> = ad
        .tagged
        .iter()
        .enumerate()
        .filter_map(|(si, tagged)| {
            let words = tagged.iter().filter(|t| t.pos != Pos::Punct).count();
            if words < lo || words > hi {
                return None;
            }
            let ant = antonym_sites(kit, tagged);
            let nouns = noun_sites(tagged);
            (!ant.is_empty() || !nouns.is_empty()).then_some((si, ant, nouns))
        })
        .collect();

    let mut out = ParaBuild::default();
    let sentences = cfg.per_doc_budget.div_ceil(2);
    for pick in pick_sorted(&mut rng, candidates.len(), sentences) {
        let (si, ant, nouns) = &candidates[pick];
        let s = ad.sentences[*si].text.as_str();
        let tagged = &ad.tagged[*si];
        let use_antonym = match (ant.is_empty(), nouns.is_empty()) {
            (false, false) => rng.gen_bool(cfg.antonym_share),
            (false, true) => true,
            _ => false,
        };
        let (perturbed, kind) = if use_antonym {
            (perturb_antonym(kit, s, tagged, ant, &mut rng), Perturbation::Antonym)
        } else {
            match perturb_shuffle(s, tagged, nouns, cfg.shuffle_retries, &mut rng) {
                Some(p) => (p, Perturbation::NounShuffle),
                None => continue,
            }
        };
        let (pos, neg) = match (paraphraser.transform(s), paraphraser.transform(&perturbed)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                log::debug!("paraphrase failed for {}: {e}", ad.doc.id);
                out.paraphrase_failures += 1;
                continue;
            }
        };
        out.samples.push(ParaSample {
            sentence1: s.to_string(),
            sentence2: pos,
            label: ParaLabel::Yes,
            perturbation: None,
            perturbed: None,
        });
        out.samples.push(ParaSample {
            sentence1: s.to_string(),
            sentence2: neg,
            label: ParaLabel::Not,
            perturbation: Some(kind),
            perturbed: Some(perturbed),
        });
    }
    out
}
