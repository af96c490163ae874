use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context};
use pseudotune::constructors::{
    build_corpus, BuildContext, ConstructorError, IdentityParaphraser, Paraphraser, RoundTripTranslator, RuleParaphraser,
};
use pseudotune::corpus::{ingest, CorpusManifest, ManifestBuilder};
use pseudotune::evalkit::{self, DummyScorer, EvalOptions, EvalReport, HttpScorer, Metric, ScorerBackend};
use pseudotune::mixer::{self, FileEntry, MixError, MixInputs};
use pseudotune::templating::{load_templates, LabeledRecord};
use pseudotune::textkit::{LexiconPaths, Lexicons, TextKit};
use pseudotune::{seed, ClusterSample, Document, InstructionTemplate, PseudoSample, TextToTextExample};
use serde::{Deserialize, Serialize};

use crate::config::{ParaphraserKind, RunConfig, ScorerKind};
use crate::io::{jsonl_files, read_jsonl, read_jsonl_numbered, write_jsonl, write_pretty, Staging};
use crate::{backend, data, usage, Failure};

pub const PSEUDO_DIR: &str = "pseudo";
pub const DATASET_DIR: &str = "dataset";
pub const EVAL_DIR: &str = "eval";
pub const BUILD_STATS: &str = "build_stats.json";

fn say(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<(), Failure> {
    writeln!(out, "{line}").map_err(|e| data(anyhow!("cannot write output: {e}")))
}

fn load_kit(cfg: &RunConfig) -> Result<TextKit, Failure> {
    let lex = if cfg.lexicons == LexiconPaths::default() {
        Lexicons::bundled()
    } else {
        Arc::new(Lexicons::load(&cfg.lexicons).map_err(data)?)
    };
    Ok(TextKit::new(lex))
}

fn paraphraser(cfg: &RunConfig, kit: &TextKit) -> Arc<dyn Paraphraser> {
    match cfg.paraphraser.kind {
        ParaphraserKind::Rule => Arc::new(RuleParaphraser::new(kit.clone(), cfg.seed)),
        ParaphraserKind::Identity => Arc::new(IdentityParaphraser),
        ParaphraserKind::Translate => Arc::new(RoundTripTranslator::new(cfg.paraphraser.translate.clone())),
    }
}

fn ingest_all(cfg: &RunConfig) -> Result<(Vec<Document>, CorpusManifest), Failure> {
    let mut docs = Vec::new();
    let mut manifest = ManifestBuilder::new(cfg.corpus.ingest.clone());
    for src in &cfg.corpus.sources {
        let mut stream =
            ingest(&src.path, src.resolved_format(), src.domain, cfg.corpus.ingest.clone()).map_err(data)?;
        for doc in stream.by_ref() {
            docs.push(doc.map_err(data)?);
        }
        let summary = stream.finish();
        log::info!("{}: {} documents, {} rejected", summary.stats.path, summary.stats.count, summary.stats.rejected);
        manifest.add(summary);
    }
    Ok((docs, manifest.finish()))
}

/// Contents of `build_stats.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BuildReport {
    pub run_config: serde_json::Value,
    pub corpus: CorpusManifest,
    pub stats: pseudotune::constructors::BuildStats,
    pub topic_labels: Option<pseudotune::constructors::TopicLabels>,
    pub files: BTreeMap<String, FileEntry>,
}

pub fn build(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    if cfg.corpus.sources.is_empty() {
        return Err(usage(anyhow!("no corpus sources; set [corpus] in the config or pass --corpus")));
    }
    let kit = load_kit(cfg)?;
    let (docs, corpus) = ingest_all(cfg)?;
    if docs.is_empty() {
        return Err(data(anyhow!("no documents")));
    }
    let mut ctx = BuildContext::new(kit.clone(), cfg.constructors.clone());
    ctx.clusters = cfg.clusters.clone();
    ctx.jobs = cfg.jobs;
    ctx.paraphraser = paraphraser(cfg, &kit);
    let output = build_corpus(&ctx, &docs).map_err(|e| match e {
        ConstructorError::Config(_) => usage(e),
        _ => data(e),
    })?;

    let staging = Staging::new(&cfg.out.join(PSEUDO_DIR)).map_err(data)?;
    let mut files = BTreeMap::new();
    for cluster in pseudotune::Cluster::ALL.into_iter().filter(|c| cfg.clusters.contains(c)) {
        let name = format!("{cluster}.jsonl");
        let path = staging.path().join(&name);
        let lines = write_jsonl(&path, output.samples.iter().filter(|s| s.cluster() == cluster)).map_err(data)?;
        let sha256 = mixer::file_sha256(&path).map_err(data)?;
        files.insert(name, FileEntry { sha256, lines });
    }
    let report = BuildReport {
        run_config: cfg.echo(),
        corpus,
        stats: output.stats,
        topic_labels: output.topic_labels,
        files,
    };
    write_pretty(&staging.path().join(BUILD_STATS), &report).map_err(data)?;
    staging.commit().map_err(data)?;

    say(out, format_args!("documents: {}", report.stats.documents))?;
    for (name, f) in &report.files {
        say(out, format_args!("{name}: {}", f.lines))?;
    }
    if report.stats.tc_skipped_no_urls {
        say(out, format_args!("warning: no document URL yielded a topic; TC skipped"))?;
    }
    Ok(())
}

fn templates(cfg: &RunConfig) -> Result<Vec<InstructionTemplate>, Failure> {
    let path = cfg
        .templates
        .as_ref()
        .ok_or_else(|| usage(anyhow!("no instruction templates; set `templates` in the config or pass --templates")))?;
    let ts = load_templates(path).map_err(|e| usage(anyhow!("templates {}: {e}", path.display())))?;
    if ts.is_empty() {
        return Err(usage(anyhow!("templates {}: no templates", path.display())));
    }
    Ok(ts)
}

fn read_records(paths: &[PathBuf]) -> Result<Vec<LabeledRecord>, Failure> {
    let mut out = Vec::new();
    for f in jsonl_files(paths).map_err(data)? {
        out.extend(read_jsonl::<LabeledRecord>(&f).map_err(data)?);
    }
    Ok(out)
}

fn mix_failure(e: MixError) -> Failure {
    match e {
        MixError::Spec(_) => usage(e),
        _ => data(e),
    }
}

pub fn mix(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let templates = templates(cfg)?;
    let pseudo_dir = cfg.out.join(PSEUDO_DIR);
    let stats_path = pseudo_dir.join(BUILD_STATS);
    if !stats_path.is_file() {
        return Err(data(anyhow!("no build outputs in {}; run `pseudotune build` first", pseudo_dir.display())));
    }
    let text = std::fs::read_to_string(&stats_path).map_err(|e| data(anyhow!("{}: {e}", stats_path.display())))?;
    let built: BuildReport = serde_json::from_str(&text).map_err(|e| data(anyhow!("{}: {e}", stats_path.display())))?;
    let mut pseudo: Vec<PseudoSample> = Vec::new();
    for f in jsonl_files(&[pseudo_dir]).map_err(data)? {
        pseudo.extend(read_jsonl::<PseudoSample>(&f).map_err(data)?);
    }
    let labeled = read_records(&cfg.labeled)?;
    let kit = if cfg.mix.augment_labeled { Some(load_kit(cfg)?) } else { None };
    let para = kit.as_ref().map(|k| paraphraser(cfg, k));
    let labels = built.topic_labels.as_ref().map(|t| t.labels.clone());
    let inputs = MixInputs {
        labeled: &labeled,
        pseudo: &pseudo,
        templates: &templates,
        topic_labels: labels.as_deref(),
        corpus_hash: Some(&built.corpus.content_hash),
        paraphraser: para.as_deref(),
    };

    let staging = Staging::new(&cfg.out.join(DATASET_DIR)).map_err(data)?;
    let manifest = mixer::mix(&inputs, &cfg.mix, staging.path()).map_err(mix_failure)?;
    let manifest_path = staging.path().join("manifest.json");
    let mut value = serde_json::to_value(&manifest).map_err(data)?;
    value["run_config"] = cfg.echo();
    write_pretty(&manifest_path, &value).map_err(data)?;
    staging.commit().map_err(data)?;

    say(out, format_args!("scenario: {}", cfg.mix.scenario.as_str()))?;
    say(out, format_args!("train: {}  valid: {}", manifest.train, manifest.valid))?;
    for (origin, n) in &manifest.totals {
        say(out, format_args!("{}: {n}", origin.as_str()))?;
    }
    if manifest.render_errors > 0 {
        say(out, format_args!("render errors: {}", manifest.render_errors))?;
    }
    Ok(())
}

/// Contents of `report.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalOutput {
    pub run_config: serde_json::Value,
    pub scorer: ScorerKind,
    /// The HTTP backend was unreachable and the dummy scorer stood in.
    pub fallback: bool,
    pub reports: Vec<EvalReport>,
}

fn scorer(cfg: &RunConfig) -> Result<(Box<dyn ScorerBackend>, ScorerKind, bool), Failure> {
    match cfg.scorer.kind {
        ScorerKind::Dummy => Ok((Box::new(DummyScorer::new()), ScorerKind::Dummy, false)),
        ScorerKind::Http => {
            let http = HttpScorer::new(cfg.scorer.http.clone());
            match http.score("ping", "ping") {
                Ok(_) => Ok((Box::new(http), ScorerKind::Http, false)),
                Err(e) if cfg.eval.dummy_fallback => {
                    log::warn!("scorer {} unreachable ({e}); using the dummy scorer", cfg.scorer.http.endpoint);
                    Ok((Box::new(DummyScorer::new()), ScorerKind::Dummy, true))
                }
                Err(e) => Err(backend(anyhow!("scorer {} unreachable: {e}", cfg.scorer.http.endpoint))),
            }
        }
    }
}

fn evaluate_all(
    scorer: &dyn ScorerBackend,
    templates: &[InstructionTemplate],
    records: &[LabeledRecord],
    dataset: &[TextToTextExample],
    opts: EvalOptions,
) -> Result<Vec<EvalReport>, Failure> {
    let mut reports = Vec::new();
    let tasks: BTreeSet<&str> = records.iter().map(|r| r.task.as_str()).collect();
    for task in tasks {
        let report = evalkit::evaluate(scorer, task, templates, records, opts).map_err(data)?;
        if report.instructions.is_empty() {
            log::warn!("task {task}: no template applies");
        }
        reports.push(report);
    }
    let mut by_task: BTreeMap<&str, Vec<TextToTextExample>> = BTreeMap::new();
    for ex in dataset {
        by_task.entry(&ex.meta.task).or_default().push(ex.clone());
    }
    for (task, exs) in by_task {
        let metric = Metric::for_cluster(exs[0].meta.cluster);
        reports.push(evalkit::evaluate_examples(scorer, task, metric, &exs, opts));
    }
    Ok(reports)
}

pub fn eval(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let templates = templates(cfg)?;
    if cfg.eval.tasks.is_empty() && cfg.eval.dataset.is_none() {
        return Err(usage(anyhow!("nothing to evaluate; set [eval] tasks or pass --tasks / --dataset")));
    }
    let records = read_records(&cfg.eval.tasks)?;
    let dataset = match &cfg.eval.dataset {
        Some(p) => read_jsonl::<TextToTextExample>(p).map_err(data)?,
        None => Vec::new(),
    };
    if records.is_empty() && dataset.is_empty() {
        return Err(data(anyhow!("no evaluation items")));
    }
    let (scorer, kind, fallback) = scorer(cfg)?;
    let opts = EvalOptions { per_token: cfg.eval.per_token };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().map_err(data)?;
    let reports = pool.install(|| evaluate_all(scorer.as_ref(), &templates, &records, &dataset, opts))?;

    let result = EvalOutput { run_config: cfg.echo(), scorer: kind, fallback, reports };
    let table: String = result.reports.iter().map(|r| r.to_table() + "\n").collect();
    let staging = Staging::new(&cfg.out.join(EVAL_DIR)).map_err(data)?;
    write_pretty(&staging.path().join("report.json"), &result).map_err(data)?;
    std::fs::write(staging.path().join("report.txt"), &table).map_err(data)?;
    staging.commit().map_err(data)?;
    out.write_all(table.as_bytes()).map_err(data)?;

    let items: usize = result.reports.iter().flat_map(|r| &r.instructions).map(|i| i.items).sum();
    let errored: usize = result.reports.iter().map(|r| r.errored_items).sum();
    if items > 0 && errored == items {
        return Err(backend(anyhow!("every one of {items} items failed to score")));
    }
    Ok(())
}

enum Record {
    Sample { id: Option<String>, sample: ClusterSample },
    Example(TextToTextExample),
}

fn classify(path: &Path, line: usize, v: serde_json::Value) -> Result<Record, Failure> {
    let bad = |e: String| data(anyhow!("{}:{line}: {e}", path.display()));
    if v.get("input").is_some() && v.get("meta").is_some() {
        return serde_json::from_value(v).map(Record::Example).map_err(|e| bad(e.to_string()));
    }
    if v.get("cluster").is_some() {
        let id = v.get("id").and_then(|x| x.as_str()).map(str::to_string);
        return serde_json::from_value(v).map(|sample| Record::Sample { id, sample }).map_err(|e| bad(e.to_string()));
    }
    Err(bad("neither a cluster sample nor a rendered example".into()))
}

fn indent(s: &str) -> String {
    s.replace('\n', "\n    ")
}

fn render_record(line: usize, r: &Record) -> String {
    let mut b = String::new();
    let mut field = |k: &str, v: &str| b.push_str(&format!("  {k}: {}\n", indent(v)));
    let header;
    match r {
        Record::Example(ex) => {
            header = format!("--- line {line}  {}  {}  [{} / {}]", ex.meta.cluster, ex.id, ex.meta.task, ex.meta.origin.as_str());
            field("input", &ex.input);
            if let Some(cs) = &ex.answer_choices {
                field("choices", &cs.join(" | "));
            }
            field("target", &ex.target);
        }
        Record::Sample { id, sample } => {
            header = format!("--- line {line}  {}  {}", sample.cluster(), id.as_deref().unwrap_or("-"));
            match sample {
                ClusterSample::Mcqa(s) => {
                    field("passage", &s.passage);
                    field("question", &s.question);
                    let opts: Vec<String> = s
                        .options
                        .iter()
                        .enumerate()
                        .map(|(i, o)| format!("({}) {o}", (b'A' + i as u8) as char))
                        .collect();
                    field("options", &opts.join("  "));
                    field("answer", &format!("({}) {}", (b'A' + s.answer_index as u8) as char, s.answer()));
                }
                ClusterSample::Exqa(s) => {
                    field("passage", &s.passage);
                    field("question", &s.question);
                    field("answer", &format!("{} @ {}..{}", s.answer, s.answer_char_span.0, s.answer_char_span.1));
                }
                ClusterSample::Cbqa(s) => {
                    field("question", &s.question);
                    field("answer", &s.answer);
                }
                ClusterSample::Sent(s) => {
                    field("text", &s.text);
                    field("label", s.label.as_str());
                }
                ClusterSample::Tc(s) => {
                    field("text", &s.text);
                    field("label", &s.label);
                }
                ClusterSample::S2t(s) => {
                    field("keywords", &s.keywords.join(", "));
                    field("text", &s.text);
                }
                ClusterSample::Sum(s) => {
                    field("document", &s.document);
                    field("summary", &s.summary);
                }
                ClusterSample::Para(s) => {
                    field("sentence1", &s.sentence1);
                    field("sentence2", &s.sentence2);
                    field("label", s.label.as_str());
                }
            }
        }
    }
    format!("{header}\n{b}")
}

/// Prints `n` records picked by `seed`, in file order.
pub fn inspect(path: &Path, n: usize, seed_value: u64, out: &mut dyn Write) -> Result<(), Failure> {
    let rows = read_jsonl_numbered::<serde_json::Value>(path).map_err(data)?;
    let mut records = Vec::with_capacity(rows.len());
    for (line, v) in rows {
        records.push((line, classify(path, line, v)?));
    }
    let k = n.min(records.len());
    let mut rng = seed::rng_for(seed_value, &["inspect"]);
    let mut picks = rand::seq::index::sample(&mut rng, records.len(), k).into_vec();
    picks.sort_unstable();
    for i in picks {
        let (line, r) = &records[i];
        out.write_all(render_record(*line, r).as_bytes()).map_err(data)?;
    }
    Ok(())
}

/// Record counts per cluster (samples) and per task and origin (rendered examples).
pub fn stats(path: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let files = jsonl_files(&[path.to_path_buf()]).map_err(data)?;
    if files.is_empty() {
        return Err(data(anyhow!("no JSONL files under {}", path.display())));
    }
    let mut clusters: BTreeMap<String, usize> = BTreeMap::new();
    let mut tasks: BTreeMap<(String, String), usize> = BTreeMap::new();
    for f in &files {
        for (line, v) in read_jsonl_numbered::<serde_json::Value>(f).map_err(data)? {
            match classify(f, line, v)? {
                Record::Sample { sample, .. } => *clusters.entry(sample.cluster().to_string()).or_default() += 1,
                Record::Example(ex) => {
                    *tasks.entry((ex.meta.task, ex.meta.origin.as_str().to_string())).or_default() += 1
                }
            }
        }
    }
    let rel = |p: &Path| p.strip_prefix(path).ok().filter(|r| !r.as_os_str().is_empty()).unwrap_or(p).display().to_string();
    say(out, format_args!("files: {}", files.iter().map(|f| rel(f)).collect::<Vec<_>>().join(", ")))?;
    if !clusters.is_empty() {
        say(out, format_args!("{:<12} {:>8}", "cluster", "samples"))?;
        for (c, n) in &clusters {
            say(out, format_args!("{c:<12} {n:>8}"))?;
        }
    }
    if !tasks.is_empty() {
        let width = tasks.keys().map(|(t, _)| t.len()).max().unwrap_or(4).max(4);
        say(out, format_args!("{:<width$} {:<9} {:>8}", "task", "origin", "examples"))?;
        for ((t, o), n) in &tasks {
            say(out, format_args!("{t:<width$} {o:<9} {n:>8}"))?;
        }
    }
    Ok(())
}

/// Reads a written dataset manifest back, e.g. for tests and tooling.
pub fn read_manifest(dir: &Path) -> anyhow::Result<serde_json::Value> {
    let p = dir.join("manifest.json");
    let text = std::fs::read_to_string(&p).with_context(|| format!("cannot read {}", p.display()))?;
    Ok(serde_json::from_str(&text)?)
}
