//! Dataset assembly: scenario gates, rendering, caps, ablations, split and
//! manifest.
//!
//! Every random choice is a function of `(seed, purpose, example id)`, so the
//! output depends only on the inputs and the [`MixSpec`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructors::{Cluster, ClusterSample, Paraphraser, PseudoSample};
use crate::corpus::Domain;
use crate::seed;
use crate::templating::{render, InstructionTemplate, LabeledRecord, Origin, RenderContext, TextToTextExample};

pub const DEFAULT_TASK_CAP: usize = 10_000;
pub const DEFAULT_INSTRUCTION_CAP: usize = 3_000;
pub const FEW_SAMPLES_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    NoLabeled,
    FewTasks,
    FewDatasets,
    FewSamples,
    Full,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::NoLabeled,
        Scenario::FewTasks,
        Scenario::FewDatasets,
        Scenario::FewSamples,
        Scenario::Full,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::NoLabeled => "no_labeled",
            Scenario::FewTasks => "few_tasks",
            Scenario::FewDatasets => "few_datasets",
            Scenario::FewSamples => "few_samples",
            Scenario::Full => "full",
        }
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Scenario::ALL
            .into_iter()
            .find(|x| x.as_str() == key)
            .ok_or_else(|| format!("unknown scenario {s:?} (expected one of no_labeled, few_tasks, few_datasets, few_samples, full)"))
    }
}

/// Declarative mixture plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MixSpec {
    pub scenario: Scenario,
    /// Per-task cap on pseudo-labeled examples.
    pub pseudo_cap: usize,
    /// Per-task cap on labeled examples; the scenario may lower it.
    pub labeled_cap: Option<usize>,
    /// Per-(task, instruction) cap.
    pub instruction_cap: usize,
    /// Apply `pseudo_cap` to all origins of a task together.
    pub joint_cap: bool,
    /// Clusters kept at all. Unset keeps every cluster.
    pub clusters: Option<Vec<Cluster>>,
    /// Clusters whose labeled data are replaced by pseudo-labeled data.
    pub replace_clusters: Vec<Cluster>,
    /// Clusters that receive pseudo-labeled data. Unset uses the scenario default.
    pub pseudo_clusters: Option<Vec<Cluster>>,
    /// Data-sufficient clusters of the few-tasks scenario.
    pub labeled_clusters: Vec<Cluster>,
    /// Share of tasks per cluster kept by the few-datasets scenario.
    pub few_datasets_fraction: f64,
    /// Pseudo-labeled sources allowed; unset allows all.
    pub domain_filter: Option<Vec<Domain>>,
    /// Clusters the domain filter does not touch.
    pub domain_exempt: Vec<Cluster>,
    pub shuffle_labels: bool,
    pub augment_labeled: bool,
    pub validation_fraction: f64,
    pub seed: u64,
}

impl Default for MixSpec {
    fn default() -> Self {
        MixSpec {
            scenario: Scenario::Full,
            pseudo_cap: DEFAULT_TASK_CAP,
            labeled_cap: None,
            instruction_cap: DEFAULT_INSTRUCTION_CAP,
            joint_cap: false,
            clusters: None,
            replace_clusters: Vec::new(),
            pseudo_clusters: None,
            labeled_clusters: vec![Cluster::Exqa],
            few_datasets_fraction: 0.1,
            domain_filter: None,
            domain_exempt: vec![Cluster::Sent, Cluster::Tc],
            shuffle_labels: false,
            augment_labeled: false,
            validation_fraction: 0.02,
            seed: 0,
        }
    }
}

impl MixSpec {
    pub fn for_scenario(scenario: Scenario) -> Self {
        MixSpec { scenario, ..Default::default() }
    }

    /// Labeled cap after the scenario has had its say.
    pub fn effective_labeled_cap(&self) -> usize {
        let given = self.labeled_cap.unwrap_or(DEFAULT_TASK_CAP);
        match self.scenario {
            Scenario::NoLabeled => 0,
            Scenario::FewSamples => given.min(FEW_SAMPLES_CAP),
            _ => given,
        }
    }

    fn includes(&self, c: Cluster) -> bool {
        self.clusters.as_ref().map_or(true, |cs| cs.contains(&c))
    }

    fn wants_pseudo(&self, c: Cluster) -> bool {
        if !self.includes(c) {
            return false;
        }
        match &self.pseudo_clusters {
            Some(cs) => cs.contains(&c),
            None => self.scenario != Scenario::FewTasks || !self.labeled_clusters.contains(&c),
        }
    }

    pub fn validate(&self) -> Result<(), MixError> {
        let bad = |m: &str| Err(MixError::Spec(m.to_string()));
        if self.pseudo_cap == 0 || self.instruction_cap == 0 {
            return bad("caps must be positive");
        }
        if self.labeled_cap == Some(0) && self.scenario != Scenario::NoLabeled {
            return bad("labeled_cap must be positive outside no_labeled");
        }
        if !(0.0..0.5).contains(&self.validation_fraction) {
            return bad("validation_fraction must be within [0, 0.5)");
        }
        if !(self.few_datasets_fraction > 0.0 && self.few_datasets_fraction <= 1.0) {
            return bad("few_datasets_fraction must be within (0, 1]");
        }
        if self.domain_filter.as_ref().is_some_and(Vec::is_empty) {
            return bad("domain_filter must name at least one domain");
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum MixError {
    #[error("invalid mix spec: {0}")]
    Spec(String),
    #[error("the mixed dataset is empty")]
    Empty,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cap violated after writing: {0}")]
    CapViolation(String),
    #[error("{path}:{line}: {message}")]
    Reread { path: PathBuf, line: usize, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> MixError + '_ {
    move |source| MixError::Io { path: path.to_path_buf(), source }
}

fn rank(seed: u64, purpose: &str, id: &str) -> u64 {
    seed::derive(seed, &[purpose, id])
}

/// Keeps the `k` items with the smallest hash rank, in their original order.
fn keep_lowest<T>(items: Vec<T>, k: usize, seed: u64, purpose: &str, id: impl Fn(&T) -> &str) -> Vec<T> {
    if items.len() <= k {
        return items;
    }
    let mut order: Vec<(u64, usize)> = items.iter().enumerate().map(|(i, x)| (rank(seed, purpose, id(x)), i)).collect();
    order.sort_unstable();
    let keep: BTreeSet<usize> = order[..k].iter().map(|&(_, i)| i).collect();
    items.into_iter().enumerate().filter(|(i, _)| keep.contains(i)).map(|(_, x)| x).collect()
}

fn cap_groups<K: Ord + Clone>(
    examples: Vec<TextToTextExample>,
    seed: u64,
    purpose: &str,
    key: impl Fn(&TextToTextExample) -> Option<(K, usize)>,
) -> Vec<TextToTextExample> {
    let mut groups: BTreeMap<K, (usize, Vec<usize>)> = BTreeMap::new();
    for (i, ex) in examples.iter().enumerate() {
        if let Some((k, cap)) = key(ex) {
            groups.entry(k).or_insert((cap, Vec::new())).1.push(i);
        }
    }
    let mut drop = vec![false; examples.len()];
    for (_, (cap, mut members)) in groups {
        if members.len() > cap {
            members.sort_by_cached_key(|&i| (rank(seed, purpose, &examples[i].id), i));
            for &i in &members[cap..] {
                drop[i] = true;
            }
        }
    }
    examples.into_iter().zip(drop).filter(|(_, d)| !d).map(|(e, _)| e).collect()
}

/// Per-(task, instruction) cap.
pub fn apply_instruction_cap(examples: Vec<TextToTextExample>, spec: &MixSpec) -> Vec<TextToTextExample> {
    let cap = spec.instruction_cap;
    cap_groups(examples, spec.seed, "instruction-cap", |e| Some(((e.meta.task.clone(), e.meta.instruction_id.clone()), cap)))
}

/// Per-task caps, separately per origin unless `joint_cap` is set.
pub fn apply_task_cap(examples: Vec<TextToTextExample>, spec: &MixSpec) -> Vec<TextToTextExample> {
    let labeled = spec.effective_labeled_cap();
    if spec.joint_cap {
        let cap = spec.pseudo_cap;
        return cap_groups(examples, spec.seed, "task-cap", |e| Some(((e.meta.task.clone(), None::<Origin>), cap)));
    }
    cap_groups(examples, spec.seed, "task-cap", |e| {
        let cap = match e.meta.origin {
            Origin::Pseudo => spec.pseudo_cap,
            Origin::Labeled | Origin::Augmented => labeled,
        };
        Some(((e.meta.task.clone(), Some(e.meta.origin)), cap))
    })
}

/// Instruction cap, then task caps.
pub fn apply_caps(examples: Vec<TextToTextExample>, spec: &MixSpec) -> Vec<TextToTextExample> {
    apply_task_cap(apply_instruction_cap(examples, spec), spec)
}

/// Replaces each classification target with a uniform draw from its choices.
/// Returns the examples and how many had no choices.
pub fn shuffle_labels(examples: Vec<TextToTextExample>, seed: u64) -> (Vec<TextToTextExample>, usize) {
    let mut passthrough = 0;
    let out = examples
        .into_iter()
        .map(|mut ex| {
            match ex.answer_choices.as_ref().filter(|c| !c.is_empty()) {
                Some(choices) => {
                    let mut rng = seed::rng_for(seed, &["shuffle-labels", &ex.id]);
                    ex.target = choices[rng.gen_range(0..choices.len())].clone();
                }
                None => passthrough += 1,
            }
            ex
        })
        .collect();
    (out, passthrough)
}

/// Adds a paraphrased copy of every labeled example. Returns the examples and
/// the number of paraphrase failures.
pub fn augment_labeled(examples: Vec<TextToTextExample>, paraphraser: &dyn Paraphraser) -> (Vec<TextToTextExample>, usize) {
    let mut failures = 0;
    let mut out = Vec::with_capacity(examples.len() * 2);
    for ex in examples {
        let extra = if ex.meta.origin == Origin::Labeled {
            match paraphraser.transform(&ex.input) {
                Ok(input) => {
                    let mut aug = ex.clone();
                    aug.id = format!("{}~aug", ex.id);
                    aug.input = input;
                    aug.meta.origin = Origin::Augmented;
                    Some(aug)
                }
                Err(e) => {
                    log::debug!("augmenting {} failed: {e}", ex.id);
                    failures += 1;
                    None
                }
            }
        } else {
            None
        };
        out.push(ex);
        out.extend(extra);
    }
    (out, failures)
}

/// Splits off a validation share per task by hash rank. Returns (train, valid).
pub fn split_validation(examples: Vec<TextToTextExample>, fraction: f64, seed: u64) -> (Vec<TextToTextExample>, Vec<TextToTextExample>) {
    let mut per_task: BTreeMap<String, Vec<(u64, String)>> = BTreeMap::new();
    for ex in &examples {
        per_task.entry(ex.meta.task.clone()).or_default().push((rank(seed, "valid", &ex.id), ex.id.clone()));
    }
    let mut valid_ids: BTreeSet<String> = BTreeSet::new();
    for (_, mut ranked) in per_task {
        let k = (ranked.len() as f64 * fraction).floor() as usize;
        ranked.sort_unstable();
        valid_ids.extend(ranked.into_iter().take(k).map(|(_, id)| id));
    }
    examples.into_iter().partition(|ex| !valid_ids.contains(&ex.id))
}

fn shuffle_global(mut examples: Vec<TextToTextExample>, seed: u64) -> Vec<TextToTextExample> {
    examples.sort_by_cached_key(|ex| (rank(seed, "order", &ex.id), ex.id.clone()));
    examples
}

/// Everything [`mix`] reads.
#[derive(Clone, Copy)]
pub struct MixInputs<'a> {
    pub labeled: &'a [LabeledRecord],
    pub pseudo: &'a [PseudoSample],
    pub templates: &'a [InstructionTemplate],
    /// Frozen TC label set of the pseudo-labeled data.
    pub topic_labels: Option<&'a [String]>,
    pub corpus_hash: Option<&'a str>,
    /// Required when `augment_labeled` is set.
    pub paraphraser: Option<&'a dyn Paraphraser>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub task: String,
    pub instruction: String,
    pub origin: Origin,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub sha256: String,
    pub lines: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ablations {
    pub shuffle_labels: bool,
    pub augment_labeled: bool,
    pub domain_filter: Option<Vec<Domain>>,
    pub replace_clusters: Vec<Cluster>,
}

/// What a mix run wrote and why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub spec: MixSpec,
    pub corpus_hash: Option<String>,
    pub topic_labels: Option<Vec<String>>,
    pub ablations: Ablations,
    /// Tasks that kept labeled data after the scenario gate.
    pub labeled_tasks: Vec<String>,
    /// Recounted from the written files.
    pub counts: Vec<CountRow>,
    pub per_task: BTreeMap<String, BTreeMap<Origin, usize>>,
    pub totals: BTreeMap<Origin, usize>,
    pub pseudo_domains: Vec<Domain>,
    pub train: usize,
    pub valid: usize,
    pub render_errors: usize,
    pub label_passthrough: usize,
    pub augment_failures: usize,
    pub files: BTreeMap<String, FileEntry>,
}

impl DatasetManifest {
    pub fn labeled_total(&self) -> usize {
        self.totals.get(&Origin::Labeled).copied().unwrap_or(0)
    }
}

fn labeled_label_sets(records: &[LabeledRecord]) -> HashMap<String, Vec<String>> {
    let mut sets: HashMap<String, BTreeSet<String>> = HashMap::new();
    for r in records {
        if let ClusterSample::Tc(tc) = &r.sample {
            sets.entry(r.task.clone()).or_default().insert(tc.label.clone());
        }
    }
    sets.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect()
}

/// Applies the scenario and cluster gates to labeled records.
pub fn gate_labeled<'a>(records: &'a [LabeledRecord], spec: &MixSpec) -> Vec<&'a LabeledRecord> {
    let keep_cluster = |c: Cluster| spec.includes(c) && !spec.replace_clusters.contains(&c);
    let records: Vec<&LabeledRecord> = records.iter().filter(|r| keep_cluster(r.sample.cluster())).collect();
    match spec.scenario {
        Scenario::NoLabeled => Vec::new(),
        Scenario::FewTasks => records.into_iter().filter(|r| spec.labeled_clusters.contains(&r.sample.cluster())).collect(),
        Scenario::FewDatasets => {
            let mut tasks: BTreeMap<Cluster, BTreeSet<&str>> = BTreeMap::new();
            for r in &records {
                tasks.entry(r.sample.cluster()).or_default().insert(&r.task);
            }
            let mut kept: BTreeSet<&str> = BTreeSet::new();
            for (_, names) in tasks {
                let k = ((names.len() as f64 * spec.few_datasets_fraction).ceil() as usize).max(1);
                let names: Vec<&str> = names.into_iter().collect();
                kept.extend(keep_lowest(names, k, spec.seed, "few-datasets", |t| t));
            }
            records.into_iter().filter(|r| kept.contains(r.task.as_str())).collect()
        }
        Scenario::FewSamples => {
            let mut by_task: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
            for r in &records {
                by_task.entry(&r.task).or_default().push(&r.id);
            }
            let cap = spec.effective_labeled_cap();
            let mut kept: BTreeSet<(&str, &str)> = BTreeSet::new();
            for (task, ids) in by_task {
                kept.extend(keep_lowest(ids, cap, spec.seed, "few-samples", |id| id).into_iter().map(|id| (task, id)));
            }
            records.into_iter().filter(|r| kept.contains(&(r.task.as_str(), r.id.as_str()))).collect()
        }
        Scenario::Full => records,
    }
}

/// Applies cluster and domain gates to pseudo-labeled samples.
pub fn gate_pseudo<'a>(samples: &'a [PseudoSample], spec: &MixSpec) -> Vec<&'a PseudoSample> {
    samples
        .iter()
        .filter(|s| spec.wants_pseudo(s.cluster()))
        .filter(|s| match &spec.domain_filter {
            Some(domains) if !spec.domain_exempt.contains(&s.cluster()) => domains.contains(&s.domain),
            _ => true,
        })
        .collect()
}

/// Renders every gated sample through every applicable template. Returns the
/// examples and the number of render failures.
pub fn render_all(labeled: &[&LabeledRecord], pseudo: &[&PseudoSample], inputs: &MixInputs<'_>) -> (Vec<TextToTextExample>, usize) {
    let label_sets = labeled_label_sets(inputs.labeled);
    let mut errors = 0;
    let mut out = Vec::new();
    let mut emit = |t: &InstructionTemplate, sample: &ClusterSample, ctx: RenderContext<'_>| match render(t, sample, &ctx) {
        Ok(ex) => out.push(ex),
        Err(e) => {
            log::debug!("render {} with {}: {e}", ctx.id, t.id);
            errors += 1;
        }
    };
    for r in labeled {
        let id = format!("{}/{}", r.task, r.id);
        let cluster = r.sample.cluster();
        for t in inputs.templates.iter().filter(|t| t.cluster == cluster && t.applies_to(&r.task, Origin::Labeled)) {
            let mut ctx = RenderContext::new(&id, &r.task, Origin::Labeled);
            ctx.label_set = label_sets.get(&r.task).map(Vec::as_slice);
            emit(t, &r.sample, ctx);
        }
    }
    for s in pseudo {
        let cluster = s.cluster();
        let task = cluster.pseudo_task();
        for t in inputs.templates.iter().filter(|t| t.cluster == cluster && t.applies_to(&task, Origin::Pseudo)) {
            let mut ctx = RenderContext::new(&s.id, &task, Origin::Pseudo);
            ctx.doc_id = Some(&s.doc_id);
            ctx.domain = Some(s.domain);
            ctx.label_set = inputs.topic_labels;
            emit(t, &s.sample, ctx);
        }
    }
    (out, errors)
}

fn write_jsonl(path: &Path, examples: &[TextToTextExample]) -> Result<(), MixError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    for ex in examples {
        let line = serde_json::to_string(ex).expect("examples serialize");
        w.write_all(line.as_bytes()).map_err(io_err(path))?;
        w.write_all(b"\n").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads a JSONL file of examples, naming the first bad line.
pub fn read_examples(path: &Path) -> Result<Vec<TextToTextExample>, MixError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| MixError::Reread {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

pub fn file_sha256(path: &Path) -> Result<String, MixError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    Ok(seed::sha256_hex(&bytes))
}

/// Counts per (task, instruction, origin) in the files, and checks the caps.
pub fn recount(paths: &[&Path], spec: &MixSpec) -> Result<Vec<CountRow>, MixError> {
    let mut counts: BTreeMap<(String, String, Origin), usize> = BTreeMap::new();
    for path in paths {
        for ex in read_examples(path)? {
            *counts.entry((ex.meta.task, ex.meta.instruction_id, ex.meta.origin)).or_default() += 1;
        }
    }
    let mut per_instruction: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    let mut per_task: BTreeMap<(&str, Option<Origin>), usize> = BTreeMap::new();
    for ((task, ins, origin), n) in &counts {
        *per_instruction.entry((task, ins)).or_default() += n;
        let key = if spec.joint_cap { None } else { Some(*origin) };
        *per_task.entry((task, key)).or_default() += n;
    }
    if let Some(((task, ins), n)) = per_instruction.iter().find(|(_, &n)| n > spec.instruction_cap) {
        return Err(MixError::CapViolation(format!("{task}/{ins} has {n} examples")));
    }
    for ((task, origin), n) in &per_task {
        let cap = match origin {
            None | Some(Origin::Pseudo) => spec.pseudo_cap,
            Some(_) => spec.effective_labeled_cap(),
        };
        if *n > cap {
            return Err(MixError::CapViolation(format!("{task} ({origin:?}) has {n} examples")));
        }
    }
    Ok(counts
        .into_iter()
        .map(|((task, instruction, origin), count)| CountRow { task, instruction, origin, count })
        .collect())
}

/// Runs the whole mixture and writes `train.jsonl`, `valid.jsonl` and
/// `manifest.json` into `out_dir`.
pub fn mix(inputs: &MixInputs<'_>, spec: &MixSpec, out_dir: &Path) -> Result<DatasetManifest, MixError> {
    spec.validate()?;
    if spec.augment_labeled && inputs.paraphraser.is_none() {
        return Err(MixError::Spec("augment_labeled needs a paraphraser".into()));
    }
    let labeled = gate_labeled(inputs.labeled, spec);
    let pseudo = gate_pseudo(inputs.pseudo, spec);
    let labeled_tasks: Vec<String> = labeled.iter().map(|r| r.task.clone()).collect::<BTreeSet<_>>().into_iter().collect();

    let (examples, render_errors) = render_all(&labeled, &pseudo, inputs);
    let mut examples = apply_caps(examples, spec);

    let mut augment_failures = 0;
    if spec.augment_labeled {
        let (augmented, failures) = augment_labeled(examples, inputs.paraphraser.expect("checked above"));
        augment_failures = failures;
        examples = apply_caps(augmented, spec);
    }
    let mut label_passthrough = 0;
    if spec.shuffle_labels {
        let (shuffled, passthrough) = shuffle_labels(examples, spec.seed);
        examples = shuffled;
        label_passthrough = passthrough;
    }
    if examples.is_empty() {
        return Err(MixError::Empty);
    }
    let examples = shuffle_global(examples, spec.seed);
    let (train, valid) = split_validation(examples, spec.validation_fraction, spec.seed);

    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let train_path = out_dir.join("train.jsonl");
    let valid_path = out_dir.join("valid.jsonl");
    write_jsonl(&train_path, &train)?;
    write_jsonl(&valid_path, &valid)?;

    let counts = recount(&[&train_path, &valid_path], spec)?;
    let mut per_task: BTreeMap<String, BTreeMap<Origin, usize>> = BTreeMap::new();
    let mut totals: BTreeMap<Origin, usize> = BTreeMap::new();
    for row in &counts {
        *per_task.entry(row.task.clone()).or_default().entry(row.origin).or_default() += row.count;
        *totals.entry(row.origin).or_default() += row.count;
    }
    let pseudo_domains: Vec<Domain> = train
        .iter()
        .chain(&valid)
        .filter(|e| e.meta.origin == Origin::Pseudo)
        .filter_map(|e| e.meta.domain)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut files = BTreeMap::new();
    for (name, path, n) in [("train.jsonl", &train_path, train.len()), ("valid.jsonl", &valid_path, valid.len())] {
        files.insert(name.to_string(), FileEntry { sha256: file_sha256(path)?, lines: n });
    }

    let manifest = DatasetManifest {
        spec: spec.clone(),
        corpus_hash: inputs.corpus_hash.map(str::to_string),
        topic_labels: inputs.topic_labels.map(<[String]>::to_vec),
        ablations: Ablations {
            shuffle_labels: spec.shuffle_labels,
            augment_labeled: spec.augment_labeled,
            domain_filter: spec.domain_filter.clone(),
            replace_clusters: spec.replace_clusters.clone(),
        },
        labeled_tasks,
        counts,
        per_task,
        totals,
        pseudo_domains,
        train: train.len(),
        valid: valid.len(),
        render_errors,
        label_passthrough,
        augment_failures,
        files,
    };
    let manifest_path = out_dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&manifest_path, json + "\n").map_err(io_err(&manifest_path))?;
    Ok(manifest)
}
