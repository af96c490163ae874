use std::io::Write;

use pseudotune::constructors::{build_corpus, BuildContext, ConstructorConfig};
use pseudotune::corpus::{ingest, IngestOptions, SourceFormat};
use pseudotune::mixer::{self, MixInputs, MixSpec};
use pseudotune::templating::parse_templates;
use pseudotune::textkit::TextKit;
use pseudotune::{Cluster, Document, Domain, Origin};
use proptest::prelude::*;

const NEWS: [&str; 3] = [
    "Maria Lindqvist moved to Riverton in 1998 and opened a small bakery near the station. \
     The bakery was busy on Monday. Officials in Riverton expect the bakery to expand next year. \
     Because the station was old, the market stayed quiet.",
    "Nortek Inc. hired 40 new workers at its factory in Halifax. Critics called the factory noisy and the \
     harbour dirty. In 2004, Nortek Inc. agreed to rebuild the bridge in Halifax. \
     \"Can we repair the bridge before May?\" asked Kenji Tanaka.",
    "The council in Marlow voted on the budget on Tuesday. Residents of Marlow asked Anna Smith to protect \
     the ancient library. The library near the river attracted 300 visitors from Ashford last July. \
     Why did the council close the museum so quickly?",
];

const TEMPLATES: &str = r#"[
  {"id": "ex", "cluster": "exqa", "input_pattern": "{{passage}} Q: {{question}}", "target_pattern": "{{answer}}"},
  {"id": "su", "cluster": "sum", "input_pattern": "{{document}} Summary:", "target_pattern": "{{summary}}"},
  {"id": "tc", "cluster": "tc", "input_pattern": "{{text}} Topic? {{choices}}", "target_pattern": "{{answer}}"}
]"#;

fn corpus_file(dir: &std::path::Path) -> std::path::PathBuf {
    let path = dir.join("news.jsonl");
    let mut f = std::fs::File::create(&path).unwrap();
    for (i, text) in NEWS.iter().enumerate() {
        let topic = ["business", "sports", "politics"][i];
        let row = serde_json::json!({"text": text, "url": format!("https://www.example.com/{topic}/{i}/story")});
        writeln!(f, "{row}").unwrap();
    }
    path
}

#[test]
fn ingest_build_and_mix() {
    let dir = tempfile::tempdir().unwrap();
    let path = corpus_file(dir.path());
    let docs: Vec<Document> = ingest(&path, SourceFormat::Jsonl, Domain::News, IngestOptions::default())
        .unwrap()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(docs.len(), 3);
    assert!(docs.iter().all(|d| d.url.is_some()));

    let ctx = BuildContext::new(TextKit::default(), ConstructorConfig::default());
    let out = build_corpus(&ctx, &docs).unwrap();
    let labels = out.topic_labels.as_ref().unwrap().labels.clone();
    assert_eq!(labels, ["business", "politics", "sports"]);
    let clusters: std::collections::BTreeSet<Cluster> = out.samples.iter().map(|s| s.sample.cluster()).collect();
    assert!(clusters.contains(&Cluster::Exqa));
    assert!(clusters.contains(&Cluster::Sum));
    assert!(clusters.contains(&Cluster::Tc));

    let templates = parse_templates(TEMPLATES).unwrap();
    let inputs = MixInputs {
        labeled: &[],
        pseudo: &out.samples,
        templates: &templates,
        topic_labels: Some(&labels),
        corpus_hash: None,
        paraphraser: None,
    };
    let mix_dir = dir.path().join("mix");
    let manifest = mixer::mix(&inputs, &MixSpec::default(), &mix_dir).unwrap();
    let train = std::fs::read_to_string(mix_dir.join("train.jsonl")).unwrap();
    let valid = std::fs::read_to_string(mix_dir.join("valid.jsonl")).unwrap();
    assert_eq!(manifest.train, train.lines().count());
    assert_eq!(manifest.valid, valid.lines().count());
    assert_eq!(manifest.totals.get(&Origin::Labeled).copied().unwrap_or(0), 0);
    assert!(train.lines().all(|l| !l.contains("{{")));
}

#[test]
fn build_is_independent_of_thread_count() {
    let docs: Vec<Document> = NEWS
        .iter()
        .enumerate()
        .map(|(i, t)| Document::new(format!("news:t:{i}"), Domain::News, t).with_url(format!("https://www.example.com/health/{i}/x")))
        .collect();
    let kit = TextKit::default();
    let serial = build_corpus(&BuildContext::new(kit.clone(), ConstructorConfig::default()), &docs).unwrap();
    let mut ctx = BuildContext::new(kit, ConstructorConfig::default());
    ctx.jobs = 3;
    let parallel = build_corpus(&ctx, &docs).unwrap();
    assert_eq!(serde_json::to_string(&serial.samples).unwrap(), serde_json::to_string(&parallel.samples).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn samples_point_back_to_their_documents(picks in proptest::collection::vec(0usize..3, 1..6), seed in 0u64..1000) {
        let docs: Vec<Document> = picks
            .iter()
            .enumerate()
            .map(|(i, &k)| Document::new(format!("news:p:{i}"), Domain::News, NEWS[k]))
            .collect();
        let ctx = BuildContext::new(TextKit::default(), ConstructorConfig { seed, ..Default::default() });
        let out = build_corpus(&ctx, &docs).unwrap();
        let ids: std::collections::BTreeSet<&str> = docs.iter().map(|d| d.id.as_str()).collect();
        for s in &out.samples {
            prop_assert!(ids.contains(s.doc_id.as_str()));
            prop_assert!(s.id.starts_with(&s.doc_id));
        }
    }
}
