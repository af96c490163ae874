use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exqa::build_exqa_analyzed;
use super::mcqa::{build_mcqa_cloze_analyzed, build_mcqa_mined_analyzed};
use super::para::build_para_analyzed;
use super::s2t::build_s2t_analyzed;
use super::sum::build_sum_gsg_analyzed;
use super::{
    build_sent, build_sum_lsg, build_tc, collect_topic_labels, derive_cbqa, AnalyzedDoc, Cluster, ClusterSample,
    ConstructorConfig, ConstructorError, NounPool, Paraphraser, PseudoSample, RuleParaphraser, TopicLabels,
};
use crate::corpus::Document;
use crate::textkit::TextKit;

/// Everything a corpus build needs besides the documents.
#[derive(Clone)]
pub struct BuildContext {
    pub kit: TextKit,
    pub config: ConstructorConfig,
    /// Clusters to construct.
    pub clusters: Vec<Cluster>,
    /// Worker threads; 1 runs on the calling thread's pool of one.
    pub jobs: usize,
    /// Documents scanned for the fallback noun pool.
    pub noun_pool_docs: usize,
    pub paraphraser: Arc<dyn Paraphraser>,
    /// Frozen TC label set; collected from the corpus URLs when absent.
    pub topic_labels: Option<TopicLabels>,
}

impl BuildContext {
    pub fn new(kit: TextKit, config: ConstructorConfig) -> Self {
        let paraphraser = Arc::new(RuleParaphraser::new(kit.clone(), config.seed));
        BuildContext {
            kit,
            config,
            clusters: Cluster::ALL.to_vec(),
            jobs: 1,
            noun_pool_docs: 200,
            paraphraser,
            topic_labels: None,
        }
    }

    fn wants(&self, c: Cluster) -> bool {
        self.clusters.contains(&c)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildStats {
    pub documents: usize,
    pub per_constructor: BTreeMap<String, usize>,
    pub per_cluster: BTreeMap<Cluster, usize>,
    /// Non-review documents the SENT gate turned away.
    pub sent_domain_violations: usize,
    pub sent_indeterminate: usize,
    pub paraphrase_failures: usize,
    pub noun_pool_size: usize,
    /// TC was requested but no document carried a usable URL.
    pub tc_skipped_no_urls: bool,
}

#[derive(Debug, Clone)]
pub struct BuildOutput {
    /// Samples in document order, then constructor order, then intra-document index.
    pub samples: Vec<PseudoSample>,
    pub stats: BuildStats,
    pub topic_labels: Option<TopicLabels>,
}

#[derive(Default)]
struct DocOutput {
    samples: Vec<PseudoSample>,
    sent_violation: bool,
    sent_indeterminate: bool,
    paraphrase_failures: usize,
}

fn push(out: &mut Vec<PseudoSample>, doc: &Document, seed: u64, constructor: &str, items: impl IntoIterator<Item = ClusterSample>) {
    for (k, sample) in items.into_iter().enumerate() {
        out.push(PseudoSample {
            id: format!("{}/{}/{}", doc.id, constructor, k),
            doc_id: doc.id.clone(),
            domain: doc.domain,
            constructor: constructor.to_string(),
            seed,
            sample,
        });
    }
}

fn build_document(ctx: &BuildContext, pool: &NounPool, labels: Option<&TopicLabels>, doc: &Document) -> DocOutput {
    let kit = &ctx.kit;
    let cfg = &ctx.config;
    let seed = cfg.seed;
    let ad = AnalyzedDoc::new(kit, doc);
    let mut out = DocOutput::default();
    let s = &mut out.samples;

    if ctx.wants(Cluster::Mcqa) {
        push(s, doc, seed, "mcqa_cloze", build_mcqa_cloze_analyzed(kit, &ad, cfg, pool, seed).into_iter().map(ClusterSample::Mcqa));
        push(s, doc, seed, "mcqa_mined", build_mcqa_mined_analyzed(&ad, cfg, seed).into_iter().map(ClusterSample::Mcqa));
    }
    if ctx.wants(Cluster::Exqa) || ctx.wants(Cluster::Cbqa) {
        let mut exqa = Vec::new();
        push(&mut exqa, doc, seed, "exqa", build_exqa_analyzed(kit, &ad, cfg, seed).into_iter().map(ClusterSample::Exqa));
        if ctx.wants(Cluster::Cbqa) {
            let cbqa = derive_cbqa(&exqa);
            if ctx.wants(Cluster::Exqa) {
                s.append(&mut exqa);
            }
            push(s, doc, seed, "cbqa", cbqa.into_iter().map(ClusterSample::Cbqa));
        } else {
            s.append(&mut exqa);
        }
    }
    if ctx.wants(Cluster::Sent) {
        match build_sent(kit, doc, cfg) {
            Ok(Some(sent)) => push(s, doc, seed, "sent", [ClusterSample::Sent(sent)]),
            Ok(None) => out.sent_indeterminate = true,
            Err(_) => out.sent_violation = true,
        }
    }
    if let (true, Some(labels)) = (ctx.wants(Cluster::Tc), labels) {
        push(s, doc, seed, "tc", build_tc(doc, labels).map(ClusterSample::Tc));
    }
    if ctx.wants(Cluster::S2t) {
        push(s, doc, seed, "s2t", build_s2t_analyzed(&ad, cfg, seed).into_iter().map(ClusterSample::S2t));
    }
    if ctx.wants(Cluster::Sum) {
        push(s, doc, seed, "sum_lsg", build_sum_lsg(doc).map(ClusterSample::Sum));
        push(s, doc, seed, "sum_gsg", build_sum_gsg_analyzed(&ad).map(ClusterSample::Sum));
    }
    if ctx.wants(Cluster::Para) {
        let para = build_para_analyzed(kit, &ad, ctx.paraphraser.as_ref(), cfg, seed);
        out.paraphrase_failures = para.paraphrase_failures;
        push(s, doc, seed, "para", para.samples.into_iter().map(ClusterSample::Para));
    }
    out
}

/// Runs every requested constructor over `docs`.
///
/// The noun pool and TC label set are computed first, sequentially; documents
/// are then processed on `ctx.jobs` threads and collected in input order.
pub fn build_corpus(ctx: &BuildContext, docs: &[Document]) -> Result<BuildOutput, ConstructorError> {
    ctx.config.validate()?;
    let mut stats = BuildStats { documents: docs.len(), ..Default::default() };

    let pool = if ctx.wants(Cluster::Mcqa) {
        NounPool::from_documents(&ctx.kit, docs, ctx.noun_pool_docs)
    } else {
        NounPool::default()
    };
    stats.noun_pool_size = pool.len();

    let mut labels = ctx.topic_labels.clone();
    if ctx.wants(Cluster::Tc) && labels.is_none() {
        let urls: Vec<&str> = docs.iter().filter_map(|d| d.url.as_deref()).collect();
        match collect_topic_labels(&urls) {
            Ok(l) if !l.labels.is_empty() => {
                if l.warning {
                    log::warn!("only {} topic labels found", l.labels.len());
                }
                labels = Some(l);
            }
            Ok(_) | Err(ConstructorError::NoUrls) => stats.tc_skipped_no_urls = true,
            Err(e) => return Err(e),
        }
    }

    let threads = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs.max(1))
        .build()
        .map_err(|e| ConstructorError::ThreadPool(e.to_string()))?;
    let per_doc: Vec<DocOutput> =
        threads.install(|| docs.par_iter().map(|d| build_document(ctx, &pool, labels.as_ref(), d)).collect());

    let mut samples = Vec::new();
    for d in per_doc {
        stats.sent_domain_violations += d.sent_violation as usize;
        stats.sent_indeterminate += d.sent_indeterminate as usize;
        stats.paraphrase_failures += d.paraphrase_failures;
        for s in &d.samples {
            *stats.per_constructor.entry(s.constructor.clone()).or_default() += 1;
            *stats.per_cluster.entry(s.cluster()).or_default() += 1;
        }
        samples.extend(d.samples);
    }
    Ok(BuildOutput { samples, stats, topic_labels: labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Domain;

    fn docs() -> Vec<Document> {
        vec![
            Document::new(
                "news:a:0",
                Domain::News,
                "The council met in Springfield on Monday. The mayor said the new bridge would open in 2025. \
                 Residents asked why the budget grew? The answer was simple. Steel prices rose sharply. \
                 Labour costs also climbed. The bridge crosses the Elm River near the old mill.",
            )
            .with_url("https://example.com/politics/2024/bridge")
            .with_title("Council approves bridge budget"),
            Document::new(
                "reviews:b:0",
                Domain::Reviews,
                "This film was wonderful and the acting was superb. I loved the music. The ending was great.",
            ),
        ]
    }

    #[test]
    fn build_is_deterministic_across_jobs() {
        let kit = TextKit::default();
        let mut ctx = BuildContext::new(kit, ConstructorConfig { seed: 9, ..Default::default() });
        let one = build_corpus(&ctx, &docs()).unwrap();
        ctx.jobs = 3;
        let three = build_corpus(&ctx, &docs()).unwrap();
        assert_eq!(one.samples, three.samples);
        assert_eq!(one.stats, three.stats);
        assert!(!one.samples.is_empty());
        assert_eq!(one.stats.sent_domain_violations, 1);
        assert!(one.samples.iter().any(|s| s.cluster() == Cluster::Sent));
        assert_eq!(one.topic_labels.unwrap().labels, ["politics"]);
    }

    #[test]
    fn ids_and_cbqa_link() {
        let ctx = BuildContext::new(TextKit::default(), ConstructorConfig::default());
        let out = build_corpus(&ctx, &docs()).unwrap();
        let mut ids: Vec<&str> = out.samples.iter().map(|s| s.id.as_str()).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
        for s in &out.samples {
            assert!(s.id.starts_with(&format!("{}/{}/", s.doc_id, s.constructor)));
            if let ClusterSample::Cbqa(c) = &s.sample {
                let src = out.samples.iter().find(|e| e.id == c.source_exqa_id).unwrap();
                let ClusterSample::Exqa(e) = &src.sample else { panic!() };
                assert_eq!((&e.question, &e.answer), (&c.question, &c.answer));
            }
        }
    }

    #[test]
    fn cluster_selection() {
        let mut ctx = BuildContext::new(TextKit::default(), ConstructorConfig::default());
        ctx.clusters = vec![Cluster::Cbqa];
        let out = build_corpus(&ctx, &docs()).unwrap();
        assert!(out.samples.iter().all(|s| s.cluster() == Cluster::Cbqa));
        ctx.clusters = vec![Cluster::Tc];
        let no_url = vec![Document::new("web:c:0", Domain::Web, "Plain text only. Nothing else here.")];
        let out = build_corpus(&ctx, &no_url).unwrap();
        assert!(out.stats.tc_skipped_no_urls);
        assert!(out.samples.is_empty());
    }
}
