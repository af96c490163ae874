//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use pseudotune::constructors::{
    build_corpus, build_sum_gsg, exqa_question, extract_topic_from_url, BuildContext, ConstructorConfig, McqaMethod, ParaLabel,
};
use pseudotune::evalkit::{rank_classify, rouge_l, rouge_l_tokens, ScorerBackend, ScorerError};
use pseudotune::mixer::{self, MixInputs, MixSpec};
use pseudotune::templating::{parse_templates, ExampleMeta, LabeledRecord};
use pseudotune::textkit::{pos_tag_words, EntityKind, Polarity, TextKit};
use pseudotune::{seed, Cluster, ClusterSample, Document, Domain, Origin, PseudoSample, TextToTextExample};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_lines(path: &Path) -> Result<Vec<Value>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str(l).map_err(|e| e.to_string())).collect()
}

// ---------------------------------------------------------------- criterion 1

const TC_URL: &str = "https://www.mydailyregister.com/sports/14501/eagles-topple-trimble-8-5";
const TC_TEXT: &str = "The Eastern baseball team trailed 2-0, two innings into Monday night\u{2019}s Tri-Valley Conference Hocking Division showdown with ...";
const SENT_TEXT: &str = "AMAZING! The staff was so friendly, welcoming and the food was superb!";
const CBQA_SENTENCE: &str = "Psychroflexus planctonicus is a gram-negative bacteria which has been isolated from the Lake Xiaochaidan in the Qinghai Province In China.";
const CBQA_QUESTION: &str = "Where in China, Psychroflexus planctonicus is a gram-negative bacteria which has been isolated from the Lake Xiaochaidan in?";
const PARA_TEXT: &str = "You're likely vulnerable to online attacks.";

fn golden() -> Outcome {
    let kit = TextKit::default();
    let docs = vec![
        Document::new("news:appendix:0", Domain::News, TC_TEXT).with_url(TC_URL),
        Document::new("reviews:appendix:0", Domain::Reviews, SENT_TEXT),
        Document::new(
            "encyclopedia:appendix:0",
            Domain::Encyclopedia,
            &format!("Psychroflexus is a genus of bacteria. {CBQA_SENTENCE}"),
        ),
        Document::new("web:appendix:0", Domain::Web, PARA_TEXT),
    ];
    let ctx = BuildContext::new(kit.clone(), ConstructorConfig::default());
    let out = build_corpus(&ctx, &docs).map_err(|e| e.to_string())?;
    let of = |doc: &str| -> Vec<&PseudoSample> { out.samples.iter().filter(|s| s.doc_id == doc).collect() };

    ensure(extract_topic_from_url(TC_URL).as_deref() == Some("sports"), || "URL topic is not sports".into())?;
    let tc: Vec<&str> = of("news:appendix:0")
        .into_iter()
        .filter_map(|s| match &s.sample {
            ClusterSample::Tc(t) => Some(t.label.as_str()),
            _ => None,
        })
        .collect();
    ensure(tc == ["sports"], || format!("TC labels {tc:?}"))?;

    let sent: Vec<Polarity> = of("reviews:appendix:0")
        .into_iter()
        .filter_map(|s| match &s.sample {
            ClusterSample::Sent(x) => Some(x.label),
            _ => None,
        })
        .collect();
    ensure(sent == [Polarity::Positive], || format!("SENT labels {sent:?}"))?;

    let by_id: HashMap<&str, &PseudoSample> = out.samples.iter().map(|s| (s.id.as_str(), s)).collect();
    let mut cbqa_pairs = 0;
    for s in of("encyclopedia:appendix:0") {
        if let ClusterSample::Cbqa(cb) = &s.sample {
            let src = by_id.get(cb.source_exqa_id.as_str()).ok_or("CBQA source id missing")?;
            let ClusterSample::Exqa(ex) = &src.sample else { return Err("CBQA source is not EXQA".into()) };
            ensure(ex.question == cb.question && ex.answer == cb.answer, || format!("CBQA {cb:?} differs from {ex:?}"))?;
            cbqa_pairs += 1;
        }
    }
    ensure(cbqa_pairs > 0, || "no CBQA pair".into())?;
    let start = CBQA_SENTENCE.find("the Qinghai").unwrap();
    let q = exqa_question(&kit, CBQA_SENTENCE, (start, start + "the Qinghai Province".len()), EntityKind::PlaceLike);
    ensure(q == CBQA_QUESTION, || format!("question {q:?}"))?;

    let not = of("web:appendix:0")
        .into_iter()
        .find_map(|s| match &s.sample {
            ClusterSample::Para(p) if p.label == ParaLabel::Not => Some(p.clone()),
            _ => None,
        })
        .ok_or("no PARA negative")?;
    ensure(not.sentence1 == PARA_TEXT && not.label.as_str() == "not", || format!("PARA {not:?}"))?;
    Ok(format!("TC=sports, SENT=Positive, {cbqa_pairs} CBQA pair(s) equal their EXQA source, PARA negative labeled \"not\""))
}

// ---------------------------------------------------------------- criterion 2

const GSG_NOTIONAL: [&str; 24] = [
    "river", "market", "farmer", "garden", "village", "bridge", "teacher", "harbour", "forest", "lantern", "basket", "window",
    "painter", "doctor", "castle", "museum", "station", "library", "ladder", "kitchen", "winter", "summer", "orchard", "meadow",
];
const GSG_FUNCTION: [&str; 8] = ["the", "a", "of", "and", "in", "to", "with", "by"];

/// Exact F1 of candidate against the pooled tokens of the other sentences,
/// as the fraction (2 * matches, |candidate| + |rest|). Matches are found by
/// removing one equal token at a time from a copy of the rest.
fn brute_f1(cand: &[&str], rest: &[&str]) -> (usize, usize) {
    if cand.is_empty() || rest.is_empty() {
        return (0, 1);
    }
    let mut pool: Vec<&str> = rest.to_vec();
    let mut m = 0;
    for w in cand {
        if let Some(k) = pool.iter().position(|x| x == w) {
            pool.remove(k);
            m += 1;
        }
    }
    (2 * m, cand.len() + rest.len())
}

fn gsg_oracle() -> Outcome {
    let kit = TextKit::default();
    let mut rng = seed::rng_for(2, &["acceptance", "gsg"]);
    let mut mismatches = Vec::new();
    for d in 0..200 {
        let n = rng.gen_range(3..=50);
        let mut sentences: Vec<String> = Vec::new();
        let mut notional: Vec<Vec<&str>> = Vec::new();
        for _ in 0..n {
            let len = rng.gen_range(3..=9);
            let mut words = vec!["The"];
            let mut content = Vec::new();
            for _ in 0..len {
                if rng.gen_bool(0.6) {
                    let w = GSG_NOTIONAL[rng.gen_range(0..6 + d % 18)];
                    words.push(w);
                    content.push(w);
                } else {
                    words.push(GSG_FUNCTION.choose(&mut rng).unwrap());
                }
            }
            sentences.push(format!("{}.", words.join(" ")));
            notional.push(content);
        }
        let mut best = 0;
        let mut best_f = (0usize, 1usize);
        for i in 0..n {
            let rest: Vec<&str> = (0..n).filter(|&j| j != i).flat_map(|j| notional[j].iter().copied()).collect();
            let f = brute_f1(&notional[i], &rest);
            // strict improvement over the earlier best, compared as fractions
            if i == 0 || f.0 * best_f.1 > best_f.0 * f.1 {
                best = i;
                best_f = f;
            }
        }
        let doc = Document::new(format!("news:gsg:{d}"), Domain::News, &sentences.join(" "));
        let got = build_sum_gsg(&kit, &doc).map(|s| s.summary);
        if got.as_deref() != Some(sentences[best].as_str()) {
            mismatches.push(format!("doc {d}: expected {:?}, got {:?}", sentences[best], got));
        }
    }
    ensure(mismatches.is_empty(), || format!("{} mismatches; first: {}", mismatches.len(), mismatches[0]))?;
    Ok("200 documents, 0 mismatches against the brute-force scorer".into())
}

// ---------------------------------------------------------------- criterion 3

/// LCS length by trying every subsequence of `a`, longest first.
fn brute_lcs(a: &[u8], b: &[u8]) -> usize {
    let is_sub = |mask: u32| {
        let mut j = 0;
        for (i, x) in a.iter().enumerate() {
            if mask & (1 << i) != 0 {
                while j < b.len() && b[j] != *x {
                    j += 1;
                }
                if j == b.len() {
                    return false;
                }
                j += 1;
            }
        }
        true
    };
    let mut best = 0;
    for mask in 0u32..(1 << a.len()) {
        let k = mask.count_ones() as usize;
        if k > best && is_sub(mask) {
            best = k;
        }
    }
    best
}

fn rouge_oracle() -> Outcome {
    let mut rng = seed::rng_for(3, &["acceptance", "rouge"]);
    let mut worst = 0.0f64;
    for trial in 0..500 {
        let alphabet = rng.gen_range(2..=6u8);
        let a: Vec<u8> = (0..rng.gen_range(0..=12)).map(|_| rng.gen_range(0..alphabet)).collect();
        let b: Vec<u8> = (0..rng.gen_range(0..=12)).map(|_| rng.gen_range(0..alphabet)).collect();
        let l = brute_lcs(&a, &b);
        let expected = if l == 0 {
            0.0
        } else {
            let p = l as f64 / a.len() as f64;
            let r = l as f64 / b.len() as f64;
            2.0 * p * r / (p + r)
        };
        let got = rouge_l_tokens(&a, &b);
        let diff = (got - expected).abs();
        worst = worst.max(diff);
        ensure(diff <= 1e-12, || format!("pair {trial}: {a:?} vs {b:?}: {got} != {expected}"))?;
    }
    let fixed = rouge_l("a b c", "a x c");
    ensure(fixed == 2.0 / 3.0, || format!("F1(\"a b c\", \"a x c\") = {fixed:e}"))?;
    Ok(format!("500 pairs within {worst:.1e} of brute force; F1(\"a b c\",\"a x c\") = 2/3 exactly"))
}

// ---------------------------------------------------------------- criterion 4

fn cap_enforcement() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    // six CBQA instructions x 2000 samples = 12,000 examples in one task, no
    // instruction above 3,000; one SUM instruction x 5,000 samples in another
    let mut templates = Vec::new();
    for k in 0..6 {
        templates.push(serde_json::json!({"id": format!("cb{k}"), "cluster": "cbqa", "input_pattern": format!("Q{k}: {{{{question}}}}"), "target_pattern": "{{answer}}"}));
    }
    templates.push(serde_json::json!({"id": "su0", "cluster": "sum", "input_pattern": "{{document}}", "target_pattern": "{{summary}}"}));
    let templates = parse_templates(&Value::Array(templates).to_string()).map_err(|e| e.to_string())?;
    let mut pseudo = Vec::new();
    for i in 0..2000 {
        pseudo.push(PseudoSample {
            id: format!("d{i}/cbqa/0"),
            doc_id: format!("d{i}"),
            domain: Domain::Web,
            constructor: "cbqa".into(),
            seed: 0,
            sample: ClusterSample::Cbqa(pseudotune::constructors::CbqaSample {
                question: format!("What is item {i}?"),
                answer: format!("item {i}"),
                source_exqa_id: String::new(),
            }),
        });
    }
    for i in 0..5000 {
        pseudo.push(PseudoSample {
            id: format!("s{i}/sum_gsg/0"),
            doc_id: format!("s{i}"),
            domain: Domain::News,
            constructor: "sum_gsg".into(),
            seed: 0,
            sample: ClusterSample::Sum(pseudotune::constructors::SumSample {
                document: format!("Body {i} of the story."),
                summary: format!("Summary {i}."),
                kind: pseudotune::constructors::SumKind::Gsg,
            }),
        });
    }
    let inputs = MixInputs { labeled: &[], pseudo: &pseudo, templates: &templates, topic_labels: None, corpus_hash: None, paraphraser: None };
    let spec = MixSpec { seed: 11, ..MixSpec::default() };
    mixer::mix(&inputs, &spec, dir.path()).map_err(|e| e.to_string())?;

    let mut per_task: BTreeMap<String, usize> = BTreeMap::new();
    let mut per_instruction: BTreeMap<(String, String), usize> = BTreeMap::new();
    for f in ["train.jsonl", "valid.jsonl"] {
        for v in read_lines(&dir.path().join(f))? {
            let task = v["meta"]["task"].as_str().unwrap_or_default().to_string();
            let ins = v["meta"]["instruction_id"].as_str().unwrap_or_default().to_string();
            *per_task.entry(task.clone()).or_default() += 1;
            *per_instruction.entry((task, ins)).or_default() += 1;
        }
    }
    let cb = per_task.get("pseudo_cbqa").copied().unwrap_or(0);
    let su = per_task.get("pseudo_sum").copied().unwrap_or(0);
    let max_ins = per_instruction.values().copied().max().unwrap_or(0);
    ensure(cb == 10_000, || format!("task stream of 12000 kept {cb}"))?;
    ensure(su <= 3_000, || format!("instruction stream of 5000 kept {su}"))?;
    ensure(max_ins <= 3_000, || format!("an instruction kept {max_ins}"))?;
    Ok(format!("12000 -> {cb} per task, 5000 -> {su} per instruction (recounted from files)"))
}

// ---------------------------------------------------------------- criterion 5

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = preset("full");
    let mut runs = Vec::new();
    for _ in 0..2 {
        for cmd in ["build", "mix"] {
            let (code, _) = cli(&["--config", p(&cfg), "--out", p(dir.path()), "--seed", "7", cmd]);
            ensure(code == 0, || format!("{cmd} exited {code}"))?;
        }
        runs.push(checksums(dir.path()));
    }
    ensure(runs[0] == runs[1], || {
        let diff: Vec<_> = runs[0].iter().zip(&runs[1]).filter(|(a, b)| a != b).map(|(a, _)| a.0.clone()).collect();
        format!("checksums differ: {diff:?}")
    })?;
    Ok(format!("{} output files byte-identical across two seed-7 runs", runs[0].len()))
}

// ---------------------------------------------------------------- corpus generator

const FIRST: [&str; 12] = ["Anna", "Tomasz", "Maria", "Kenji", "Olu", "Sofia", "Liam", "Chen", "Ines", "Rafael", "Greta", "Omar"];
const LAST: [&str; 12] = ["Smith", "Kowalski", "Nguyen", "Okafor", "Lindqvist", "Moreau", "Patel", "Tanaka", "Brennan", "Alvarez", "Weber", "Haddad"];
const PLACES: [&str; 14] = [
    "Riverton", "Gdanśk", "Kościerzyna", "Lakewood", "Ashford", "Marlow", "Kingsport", "Dunmore", "Halifax", "Brookfield", "Lisbon",
    "Nairobi", "Osaka", "Quebec",
];
const ORGS: [&str; 6] = ["Nortek Inc.", "Bluefin Corp.", "the Riverton Council", "Lumina Labs", "the Harbour Trust", "Tessel Inc."];
const NOUNS: [&str; 30] = [
    "bridge", "market", "library", "harbour", "forest", "station", "castle", "museum", "garden", "factory", "school", "hospital",
    "river", "festival", "budget", "election", "engine", "album", "storm", "harvest", "bakery", "stadium", "theatre", "railway",
    "painting", "report", "vaccine", "telescope", "council", "village",
];
const ADJS: [&str; 16] = [
    "old", "new", "quiet", "busy", "large", "small", "bright", "dark", "cold", "warm", "modern", "ancient", "cheap", "expensive",
    "strong", "weak",
];
const VERBS: [&str; 10] = ["improve", "replace", "expand", "close", "repair", "visit", "fund", "protect", "study", "rebuild"];
const MONTHS: [&str; 6] = ["January", "March", "May", "July", "September", "November"];
const TOPICS: [&str; 16] = [
    "sports", "politics", "technology", "business", "health", "science", "weather", "education", "travel", "food", "crime", "music",
    "environment", "transport", "culture", "housing",
];
const GOOD: [&str; 8] = ["wonderful", "excellent", "delightful", "brilliant", "superb", "lovely", "friendly", "amazing"];
const BAD: [&str; 8] = ["terrible", "awful", "dreadful", "boring", "horrible", "disappointing", "rude", "dirty"];

fn sentence(rng: &mut impl Rng) -> String {
    let person = format!("{} {}", FIRST.choose(rng).unwrap(), LAST.choose(rng).unwrap());
    let place = *PLACES.choose(rng).unwrap();
    let org = *ORGS.choose(rng).unwrap();
    let n1 = *NOUNS.choose(rng).unwrap();
    let n2 = *NOUNS.choose(rng).unwrap();
    let adj = *ADJS.choose(rng).unwrap();
    let adj2 = *ADJS.choose(rng).unwrap();
    let verb = *VERBS.choose(rng).unwrap();
    let month = *MONTHS.choose(rng).unwrap();
    let year = rng.gen_range(1850..2030);
    let num = rng.gen_range(2..900);
    match rng.gen_range(0..12) {
        0 => format!("{person} moved to {place} in {year} and opened a small {n1} near the {n2}."),
        1 => format!("The {adj} {n1} in {place} was {adj2} on Monday."),
        2 => format!("{person} said the {n1} would {verb} the {n2} by {month}."),
        3 => format!("Officials in {place} expect the {n1} to {verb} the {adj} {n2} next year."),
        4 => format!("Why did the {n1} in {place} {verb} the {n2} so quickly?"),
        5 => format!("Because the {n1} was {adj}, the {n2} stayed {adj2}."),
        6 => format!("{org} hired {num} new workers at its {n1} in {place}."),
        7 => format!("\"Can we {verb} the {n1} before {month}?\" asked {person}."),
        8 => format!("The {n1} near the {adj} {n2} attracted {num} visitors from {place} last {month}."),
        9 => format!("Critics called the {n1} {adj} and the {n2} {adj2}."),
        10 => format!("In {year}, {org} agreed to {verb} the {n1} in {place}."),
        _ => format!("Residents of {place} asked {person} to {verb} the {adj} {n1}."),
    }
}

fn review(rng: &mut impl Rng) -> String {
    let good = rng.gen_bool(0.5);
    let words = if good { &GOOD } else { &BAD };
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(3..7) {
        let n = NOUNS.choose(rng).unwrap();
        let w = words.choose(rng).unwrap();
        out.push(match rng.gen_range(0..3) {
            0 => format!("The {n} was {w}."),
            1 => format!("We found the staff {w} and the {n} {}.", words.choose(rng).unwrap()),
            _ => sentence(rng),
        });
    }
    out.join(" ")
}

/// (text, url, title) for one synthetic news document.
fn news(rng: &mut impl Rng, i: usize) -> (String, Option<String>, Option<String>) {
    let n = rng.gen_range(4..13);
    let mut text = String::new();
    for k in 0..n {
        if k > 0 {
            text.push_str(if rng.gen_bool(0.2) { "\n\n" } else { " " });
        }
        text.push_str(&sentence(rng));
    }
    let topic = TOPICS[i % TOPICS.len()];
    let url = rng.gen_bool(0.85).then(|| format!("https://www.site{}.com/{topic}/{}/story-{i}", i % 9, 10_000 + i));
    let title = rng.gen_bool(0.5).then(|| format!("{} {} in {}", ADJS.choose(rng).unwrap(), NOUNS.choose(rng).unwrap(), PLACES.choose(rng).unwrap()));
    (text, url, title)
}

fn synthetic_docs(n: usize, seed_value: u64) -> Vec<Document> {
    let mut rng = seed::rng_for(seed_value, &["acceptance", "corpus"]);
    (0..n)
        .map(|i| {
            if i % 10 == 9 {
                Document::new(format!("reviews:synth:{i}"), Domain::Reviews, &review(&mut rng))
            } else {
                let (text, url, title) = news(&mut rng, i);
                let mut d = Document::new(format!("news:synth:{i}"), Domain::News, &text);
                if let Some(u) = url {
                    d = d.with_url(u);
                }
                if let Some(t) = title {
                    d = d.with_title(t);
                }
                d
            }
        })
        .collect()
}

// ---------------------------------------------------------------- criterion 6

fn token_present(text: &str, word: &str) -> bool {
    let (t, w) = (text.to_lowercase(), word.to_lowercase());
    let mut from = 0;
    while let Some(k) = t[from..].find(&w) {
        let s = from + k;
        let e = s + w.len();
        let before = t[..s].chars().next_back().map_or(true, |c| !c.is_alphanumeric());
        let after = t[e..].chars().next().map_or(true, |c| !c.is_alphanumeric());
        if before && after {
            return true;
        }
        from = s + t[s..].chars().next().map_or(1, char::len_utf8);
    }
    false
}

fn structural_fuzz() -> Outcome {
    let kit = TextKit::default();
    let docs = synthetic_docs(900, 6);
    let mut ctx = BuildContext::new(kit.clone(), ConstructorConfig { seed: 6, ..Default::default() });
    ctx.jobs = 2;
    let out = build_corpus(&ctx, &docs).map_err(|e| e.to_string())?;
    let labels = out.topic_labels.clone().ok_or("no topic labels")?;
    ensure(labels.labels.len() == 14, || format!("label set has {} labels", labels.labels.len()))?;
    let frozen: BTreeSet<&str> = labels.labels.iter().map(String::as_str).collect();

    let mut violations: BTreeMap<&str, usize> = BTreeMap::new();
    let mut checked: BTreeMap<&str, usize> = BTreeMap::new();
    let mut first: Option<String> = None;
    let mut flag = |kind: &'static str, bad: bool, what: &dyn Fn() -> String| {
        *checked.entry(kind).or_default() += 1;
        if bad {
            *violations.entry(kind).or_default() += 1;
            first.get_or_insert_with(what);
        }
    };
    for s in &out.samples {
        match &s.sample {
            ClusterSample::Exqa(x) => {
                let (a, b) = x.answer_char_span;
                let slice: String = x.passage.chars().skip(a).take(b.saturating_sub(a)).collect();
                flag("exqa span", b <= a || slice != x.answer, &|| format!("{}: span {a}..{b} gives {slice:?}", s.id));
            }
            ClusterSample::Mcqa(x) => {
                let lower: BTreeSet<String> = x.options.iter().map(|o| o.to_lowercase()).collect();
                let ok = x.answer_index < x.options.len() && lower.len() == x.options.len();
                flag("mcqa options", !ok, &|| format!("{}: {:?} / {}", s.id, x.options, x.answer_index));
                if x.method == McqaMethod::Cloze && ok {
                    let tags: Vec<_> = x.options.iter().map(|o| pos_tag_words(kit.lexicons(), &[o.as_str()])[0].pos).collect();
                    let want = tags[x.answer_index];
                    flag("cloze pos", tags.iter().any(|t| *t != want), &|| format!("{}: {:?} tagged {tags:?}", s.id, x.options));
                }
            }
            ClusterSample::S2t(x) => {
                let missing: Vec<&String> = x.keywords.iter().filter(|k| !token_present(&x.text, k)).collect();
                flag("s2t keywords", !missing.is_empty() || x.keywords.is_empty(), &|| format!("{}: {missing:?} not in {:?}", s.id, x.text));
            }
            ClusterSample::Tc(x) => {
                flag("tc label", !frozen.contains(x.label.as_str()), &|| format!("{}: label {:?}", s.id, x.label));
            }
            _ => {}
        }
    }
    let total = out.samples.len();
    ensure(total >= 10_000, || format!("only {total} samples generated"))?;
    for kind in ["exqa span", "mcqa options", "cloze pos", "s2t keywords", "tc label"] {
        ensure(checked.get(kind).copied().unwrap_or(0) > 0, || format!("no {kind} checks ran"))?;
    }
    let bad: usize = violations.values().sum();
    ensure(bad == 0, || format!("{bad} violations {violations:?}; first: {}", first.clone().unwrap_or_default()))?;
    let summary: Vec<String> = checked.iter().map(|(k, n)| format!("{k} {n}")).collect();
    Ok(format!("{total} samples, 0 violations ({})", summary.join(", ")))
}

// ---------------------------------------------------------------- criterion 7

/// Items are designed so that each instruction's accuracy follows from the
/// dummy scorer's rule by hand: an option scores ln 0.9 if it appears in the
/// input and ln 0.1 otherwise, ties go to the first option.
///   a_*: input shows every option, so option 0 always wins: 20/40 correct.
///   b_*: passage + question; the passage names option m (wrong when i % 5 == 0),
///        the question names the answer when i % 4 == 3: 32/40 correct.
///   c_*: question only; option 0 unless the question names the answer: 30/40.
const EVAL_EXPECTED: [(&str, f64); 3] = [("a_all_options", 0.5), ("b_passage", 0.8), ("c_question", 0.75)];

fn eval_fixture(dir: &Path) -> Result<(), String> {
    let mut lines = Vec::new();
    for i in 0..40usize {
        let answer = i % 2;
        let options = vec![format!("red{i}"), format!("blue{i}")];
        let mentioned = if i % 5 == 0 { 1 - answer } else { answer };
        let question = if i % 4 == 3 { format!("Was it the {}?", options[answer]) } else { "What came next?".to_string() };
        let rec = serde_json::json!({
            "id": i.to_string(), "task": "toy_cloze", "cluster": "mcqa",
            "passage": format!("The story ends with the {}.", options[mentioned]),
            "question": question, "options": options, "answer_index": answer, "method": "mined_question",
        });
        lines.push(rec.to_string());
    }
    std::fs::write(dir.join("toy_cloze.jsonl"), lines.join("\n") + "\n").map_err(|e| e.to_string())?;
    let templates = serde_json::json!([
        {"id": "a_all_options", "cluster": "mcqa", "input_pattern": "{{passage}} {{question}} Options: {{options}}"},
        {"id": "b_passage", "cluster": "mcqa", "input_pattern": "{{passage}} {{question}}"},
        {"id": "c_question", "cluster": "mcqa", "input_pattern": "Question: {{question}}"},
    ]);
    std::fs::write(dir.join("templates.json"), templates.to_string()).map_err(|e| e.to_string())
}

struct Transformed {
    scores: HashMap<String, f64>,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl ScorerBackend for Transformed {
    fn score(&self, _: &str, target: &str) -> Result<f64, ScorerError> {
        Ok((self.f)(self.scores[target]))
    }
}

fn monotone(rng: &mut impl Rng) -> Box<dyn Fn(f64) -> f64 + Send + Sync> {
    match rng.gen_range(0..5) {
        0 => {
            let (a, b) = (rng.gen_range(0.1..10.0), rng.gen_range(-50.0..50.0));
            Box::new(move |x| a * x + b)
        }
        1 => Box::new(|x: f64| (x / 10.0).exp()),
        2 => Box::new(|x: f64| x * x * x),
        3 => Box::new(|x: f64| (x / 20.0).atan()),
        _ => {
            let (k, lo, hi) = (rng.gen_range(-20.0..0.0), rng.gen_range(0.1..1.0), rng.gen_range(1.0..5.0));
            Box::new(move |x| if x < k { lo * (x - k) } else { hi * (x - k) })
        }
    }
}

fn eval_protocol() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    eval_fixture(dir.path())?;
    let (code, _) = cli(&[
        "--out",
        p(dir.path()),
        "--templates",
        p(&dir.path().join("templates.json")),
        "eval",
        "--tasks",
        p(&dir.path().join("toy_cloze.jsonl")),
    ]);
    ensure(code == 0, || format!("eval exited {code}"))?;
    let report = read_json(&dir.path().join("eval/report.json"))?;
    let r = &report["reports"][0];
    let got: Vec<(String, f64, u64)> = r["instructions"]
        .as_array()
        .ok_or("no instructions")?
        .iter()
        .map(|i| (i["instruction_id"].as_str().unwrap_or("").to_string(), i["value"].as_f64().unwrap_or(f64::NAN), i["items"].as_u64().unwrap_or(0)))
        .collect();
    ensure(got.len() == 3, || format!("{} instructions", got.len()))?;
    for ((id, v, items), (eid, ev)) in got.iter().zip(EVAL_EXPECTED) {
        ensure(id == eid && *v == ev && *items == 40, || format!("{id}: {v} over {items}, expected {eid}: {ev}"))?;
    }
    let mean = r["mean"].as_f64().ok_or("no mean")?;
    let median = r["median"].as_f64().ok_or("no median")?;
    let hand_mean = (0.5 + 0.8 + 0.75) / 3.0;
    ensure(mean == hand_mean && (mean - 41.0 / 60.0).abs() < 1e-15, || format!("mean {mean} != {hand_mean}"))?;
    ensure(median == 0.75, || format!("median {median} != 0.75"))?;

    let mut rng = seed::rng_for(7, &["acceptance", "monotone"]);
    let mut failures = 0;
    for trial in 0..1000 {
        let k = rng.gen_range(2..=6);
        let options: Vec<String> = (0..k).map(|i| format!("opt{i}")).collect();
        // half-unit grid keeps values apart; some trials repeat a score to exercise ties
        let mut raw: Vec<f64> = (0..k).map(|_| rng.gen_range(-80..=0) as f64 * 0.5).collect();
        if trial % 4 == 0 {
            raw[k - 1] = raw[0];
        }
        let base = Transformed { scores: options.iter().cloned().zip(raw.iter().copied()).collect(), f: Box::new(|x| x) };
        let moved = Transformed { scores: base.scores.clone(), f: monotone(&mut rng) };
        let a = rank_classify(&base, "input", &options, false).map_err(|e| e.to_string())?;
        let b = rank_classify(&moved, "input", &options, false).map_err(|e| e.to_string())?;
        if a != b {
            failures += 1;
        }
    }
    ensure(failures == 0, || format!("{failures} of 1000 monotone trials changed the argmax"))?;
    Ok(format!("accuracies 0.5/0.8/0.75, mean {mean:.6} median {median} as hand-computed; 1000 monotone trials, 0 failures"))
}

// ---------------------------------------------------------------- criterion 8

const CORPUS_BYTES: usize = 10 * 1024 * 1024;

fn write_big_corpus(dir: &Path) -> Result<usize, String> {
    let mut rng = seed::rng_for(8, &["acceptance", "throughput"]);
    let mut news_lines = Vec::new();
    let mut review_lines = Vec::new();
    let mut bytes = 0;
    let mut i = 0;
    while bytes < CORPUS_BYTES {
        if i % 10 == 9 {
            let text = review(&mut rng);
            bytes += text.len();
            review_lines.push(serde_json::json!({ "text": text }).to_string());
        } else {
            let (text, url, title) = news(&mut rng, i);
            bytes += text.len();
            news_lines.push(serde_json::json!({ "text": text, "url": url, "title": title }).to_string());
        }
        i += 1;
    }
    std::fs::write(dir.join("news.jsonl"), news_lines.join("\n") + "\n").map_err(|e| e.to_string())?;
    std::fs::write(dir.join("reviews.jsonl"), review_lines.join("\n") + "\n").map_err(|e| e.to_string())?;
    let cfg = "[corpus]\nmin_chars = 0\n\n[[corpus.sources]]\npath = \"news.jsonl\"\ndomain = \"news\"\n\n[[corpus.sources]]\npath = \"reviews.jsonl\"\ndomain = \"reviews\"\n";
    std::fs::write(dir.join("run.toml"), cfg).map_err(|e| e.to_string())?;
    Ok(bytes)
}

fn timed_build(dir: &Path, jobs: &str) -> Result<Duration, String> {
    let cfg = dir.join("run.toml");
    let out = dir.join(format!("out{jobs}"));
    let start = Instant::now();
    let (code, _) = cli(&["--config", p(&cfg), "--out", p(&out), "--jobs", jobs, "build"]);
    let t = start.elapsed();
    ensure(code == 0, || format!("build --jobs {jobs} exited {code}"))?;
    Ok(t)
}

fn throughput() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bytes = write_big_corpus(dir.path())?;
    let stats_path = |jobs: &str| dir.path().join(format!("out{jobs}/pseudo/build_stats.json"));
    // alternate the two settings and keep each one's best time
    let mut t1 = Duration::MAX;
    let mut t4 = Duration::MAX;
    for _ in 0..2 {
        t1 = t1.min(timed_build(dir.path(), "1")?);
        t4 = t4.min(timed_build(dir.path(), "4")?);
    }
    let s1 = read_json(&stats_path("1"))?;
    let s4 = read_json(&stats_path("4"))?;
    let clusters = s1["files"].as_object().map_or(0, |f| f.values().filter(|e| e["lines"].as_u64().unwrap_or(0) > 0).count());
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    let detail = format!(
        "{:.1} MB: --jobs 1 {:.2}s, --jobs 4 {:.2}s, {clusters}/8 clusters non-empty, {cpus} CPU(s) available",
        bytes as f64 / 1_048_576.0,
        t1.as_secs_f64(),
        t4.as_secs_f64()
    );
    ensure(s1["files"] == s4["files"], || format!("{detail}; outputs differ between job counts"))?;
    ensure(clusters == 8, || format!("{detail}; not every constructor produced output"))?;
    ensure(t1 < Duration::from_secs(60), || format!("{detail}; single-threaded build over 60s"))?;
    ensure(t4 < t1, || format!("{detail}; --jobs 4 not faster"))?;
    Ok(detail)
}

// ---------------------------------------------------------------- criterion 9

fn labeled_fixture_tasks() -> Result<BTreeMap<Cluster, BTreeSet<String>>, String> {
    let mut out: BTreeMap<Cluster, BTreeSet<String>> = BTreeMap::new();
    for e in std::fs::read_dir(fixtures().join("labeled")).map_err(|e| e.to_string())? {
        let path = e.map_err(|e| e.to_string())?.path();
        for v in read_lines(&path)? {
            let r: LabeledRecord = serde_json::from_value(v).map_err(|e| e.to_string())?;
            out.entry(r.sample.cluster()).or_default().insert(r.task);
        }
    }
    Ok(out)
}

fn check_preset(name: &str, fixture: &BTreeMap<Cluster, BTreeSet<String>>) -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = preset(name);
    for cmd in ["build", "mix", "eval"] {
        let (code, _) = cli(&["--config", p(&cfg), "--out", p(dir.path()), cmd]);
        ensure(code == 0, || format!("{name}: {cmd} exited {code}"))?;
    }
    let manifest = read_json(&dir.path().join("dataset/manifest.json"))?;
    ensure(manifest["spec"]["scenario"] == name, || format!("{name}: manifest scenario {}", manifest["spec"]["scenario"]))?;

    // recount from the written files
    let mut per_task: BTreeMap<(String, Origin), usize> = BTreeMap::new();
    let mut per_instruction: BTreeMap<(String, String, Origin), usize> = BTreeMap::new();
    let mut cluster_of: BTreeMap<String, Cluster> = BTreeMap::new();
    for f in ["train.jsonl", "valid.jsonl"] {
        for v in read_lines(&dir.path().join("dataset").join(f))? {
            let ex: TextToTextExample = serde_json::from_value(v).map_err(|e| e.to_string())?;
            let ExampleMeta { task, instruction_id, origin, cluster, .. } = ex.meta;
            cluster_of.insert(task.clone(), cluster);
            *per_task.entry((task.clone(), origin)).or_default() += 1;
            *per_instruction.entry((task, instruction_id, origin)).or_default() += 1;
        }
    }
    let labeled: BTreeMap<&str, usize> =
        per_task.iter().filter(|((_, o), _)| *o == Origin::Labeled).map(|((t, _), n)| (t.as_str(), *n)).collect();
    let pseudo_total: usize = per_task.iter().filter(|((_, o), _)| *o == Origin::Pseudo).map(|(_, n)| n).sum();
    let labeled_total: usize = labeled.values().sum();
    ensure(pseudo_total > 0, || format!("{name}: no pseudo-labeled examples"))?;
    ensure(per_task.iter().all(|((_, o), n)| *o != Origin::Pseudo || *n <= 10_000), || format!("{name}: pseudo cap exceeded"))?;
    ensure(per_instruction.values().all(|n| *n <= 3_000), || format!("{name}: instruction cap exceeded"))?;
    let manifest_labeled = manifest["totals"]["labeled"].as_u64().unwrap_or(0) as usize;
    ensure(manifest_labeled == labeled_total, || format!("{name}: manifest says {manifest_labeled} labeled, files hold {labeled_total}"))?;

    let fixture_tasks: usize = fixture.values().map(BTreeSet::len).sum();
    match name {
        "no_labeled" => ensure(labeled_total == 0, || format!("labeled count {labeled_total}"))?,
        "few_tasks" => {
            ensure(labeled_total > 0, || "no labeled data".into())?;
            ensure(labeled.keys().all(|t| cluster_of[*t] == Cluster::Exqa), || format!("labeled tasks {:?}", labeled.keys()))?;
            let pseudo_exqa = per_task.keys().any(|(t, o)| *o == Origin::Pseudo && cluster_of[t] == Cluster::Exqa);
            ensure(!pseudo_exqa, || "pseudo data in the data-sufficient cluster".into())?;
        }
        "few_datasets" => {
            for (c, tasks) in fixture {
                let kept = labeled.keys().filter(|t| cluster_of[**t] == *c).count();
                let want = ((tasks.len() as f64 * 0.1).ceil() as usize).max(1);
                ensure(kept == want, || format!("{c}: kept {kept} of {} tasks, want {want}", tasks.len()))?;
            }
        }
        "few_samples" => {
            ensure(labeled.len() == fixture_tasks, || format!("{} of {fixture_tasks} labeled tasks kept", labeled.len()))?;
            ensure(labeled.values().all(|n| *n <= 100), || format!("labeled counts {labeled:?}"))?;
        }
        "full" => {
            ensure(labeled.len() == fixture_tasks, || format!("{} of {fixture_tasks} labeled tasks kept", labeled.len()))?;
            let pseudo_clusters: BTreeSet<Cluster> =
                per_task.keys().filter(|(_, o)| *o == Origin::Pseudo).map(|(t, _)| cluster_of[t]).collect();
            ensure(pseudo_clusters.len() == 8, || format!("pseudo clusters {pseudo_clusters:?}"))?;
        }
        _ => return Err(format!("unknown preset {name}")),
    }
    ensure(dir.path().join("eval/report.json").is_file(), || format!("{name}: no eval report"))?;
    Ok(format!("{name} labeled={labeled_total}"))
}

fn presets() -> Outcome {
    let fixture = labeled_fixture_tasks()?;
    let mut parts = Vec::new();
    for name in ["no_labeled", "few_tasks", "few_datasets", "few_samples", "full"] {
        parts.push(check_preset(name, &fixture)?);
    }
    Ok(parts.join(", "))
}

// ---------------------------------------------------------------- runner

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 9] = [
        ("golden examples", golden, Some(Duration::from_secs(1))),
        ("GSG oracle equivalence", gsg_oracle, Some(Duration::from_secs(30))),
        ("Rouge-L oracle", rouge_oracle, None),
        ("cap enforcement", cap_enforcement, None),
        ("determinism", determinism, None),
        ("structural invariants", structural_fuzz, None),
        ("evaluation protocol", eval_protocol, None),
        ("throughput floor", throughput, None),
        ("scenario presets", presets, None),
    ];
    // let the bundled lexicons load outside any timed criterion
    let _ = TextKit::default();
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = f();
        let took = start.elapsed();
        if let (Ok(detail), Some(limit)) = (&outcome, limit) {
            if took >= *limit {
                outcome = Err(format!("{detail}; took {:.2}s, limit {}s", took.as_secs_f64(), limit.as_secs()));
            }
        }
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {}: {status} {name}: {detail} [{:.2}s]", i + 1, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
