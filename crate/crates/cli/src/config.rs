use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use pseudotune::constructors::{ConstructorConfig, TranslatorConfig};
use pseudotune::corpus::{IngestOptions, SourceFormat};
use pseudotune::evalkit::HttpScorerConfig;
use pseudotune::mixer::{MixSpec, Scenario};
use pseudotune::textkit::LexiconPaths;
use pseudotune::{Cluster, Domain};
use serde::{Deserialize, Serialize};

pub const DEFAULT_OUT: &str = "pseudotune-out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    pub path: PathBuf,
    /// Inferred from the path when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<SourceFormat>,
    #[serde(default = "default_domain")]
    pub domain: Domain,
}

fn default_domain() -> Domain {
    Domain::Other
}

impl SourceConfig {
    pub fn resolved_format(&self) -> SourceFormat {
        self.format.unwrap_or_else(|| infer_format(&self.path))
    }
}

/// `.jsonl` files, and directories holding any `.jsonl` file, are JSONL;
/// everything else is a directory of plain-text files.
pub fn infer_format(path: &Path) -> SourceFormat {
    let is_jsonl = |p: &Path| p.extension().is_some_and(|e| e == "jsonl");
    if is_jsonl(path) {
        return SourceFormat::Jsonl;
    }
    if path.is_dir() {
        if let Ok(entries) = std::fs::read_dir(path) {
            if entries.flatten().any(|e| is_jsonl(&e.path())) {
                return SourceFormat::Jsonl;
            }
        }
        return SourceFormat::PlainTextDir;
    }
    SourceFormat::PlainTextDir
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusConfig {
    pub sources: Vec<SourceConfig>,
    #[serde(flatten)]
    pub ingest: IngestOptions,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScorerKind {
    #[default]
    Dummy,
    Http,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScorerConfig {
    pub kind: ScorerKind,
    #[serde(flatten)]
    pub http: HttpScorerConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    /// Labeled-record JSONL files or directories, one task per `task` value.
    pub tasks: Vec<PathBuf>,
    /// Already-rendered examples, e.g. a mixed `valid.jsonl`.
    pub dataset: Option<PathBuf>,
    pub per_token: bool,
    /// Fall back to the dummy scorer when the HTTP backend is unreachable.
    pub dummy_fallback: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParaphraserKind {
    #[default]
    Rule,
    Identity,
    Translate,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParaphraserConfig {
    pub kind: ParaphraserKind,
    pub translate: TranslatorConfig,
}

/// Everything a command needs. Loaded from TOML or JSON, then overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub jobs: usize,
    /// Clusters constructed by `build`.
    pub clusters: Vec<Cluster>,
    pub corpus: CorpusConfig,
    pub lexicons: LexiconPaths,
    pub constructors: ConstructorConfig,
    pub templates: Option<PathBuf>,
    pub labeled: Vec<PathBuf>,
    pub mix: MixSpec,
    pub scorer: ScorerConfig,
    pub eval: EvalConfig,
    pub paraphraser: ParaphraserConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            out: PathBuf::from(DEFAULT_OUT),
            jobs: 1,
            clusters: Cluster::ALL.to_vec(),
            corpus: CorpusConfig::default(),
            lexicons: LexiconPaths::default(),
            constructors: ConstructorConfig::default(),
            templates: None,
            labeled: Vec::new(),
            mix: MixSpec::default(),
            scorer: ScorerConfig::default(),
            eval: EvalConfig::default(),
            paraphraser: ParaphraserConfig::default(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub clusters: Option<Vec<Cluster>>,
    pub scenario: Option<Scenario>,
    pub scorer: Option<ScorerKind>,
    pub endpoint: Option<String>,
    pub domain_filter: Option<Vec<Domain>>,
    pub shuffle_labels: bool,
    pub augment: bool,
    pub templates: Option<PathBuf>,
    pub corpus: Vec<PathBuf>,
    pub corpus_domain: Option<Domain>,
    pub labeled: Vec<PathBuf>,
    pub per_token: bool,
    pub dummy_fallback: bool,
}

fn rebase(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl RunConfig {
    /// Parses a config file; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> anyhow::Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: RunConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?
        } else {
            toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?
        };
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.rebase(&base);
        Ok(cfg)
    }

    fn rebase(&mut self, base: &Path) {
        rebase(base, &mut self.out);
        for s in &mut self.corpus.sources {
            rebase(base, &mut s.path);
        }
        let lex = &mut self.lexicons;
        for p in [&mut lex.pos, &mut lex.sentiment, &mut lex.antonyms, &mut lex.synonyms, &mut lex.stopwords]
            .into_iter()
            .flatten()
        {
            rebase(base, p);
        }
        if let Some(t) = &mut self.templates {
            rebase(base, t);
        }
        for p in &mut self.labeled {
            rebase(base, p);
        }
        for p in &mut self.eval.tasks {
            rebase(base, p);
        }
        if let Some(d) = &mut self.eval.dataset {
            rebase(base, d);
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        if let Some(jobs) = o.jobs {
            self.jobs = jobs;
        }
        if let Some(cs) = &o.clusters {
            self.clusters = cs.clone();
            self.mix.clusters = Some(cs.clone());
        }
        if let Some(s) = o.scenario {
            self.mix.scenario = s;
        }
        if let Some(k) = o.scorer {
            self.scorer.kind = k;
        }
        if let Some(e) = &o.endpoint {
            self.scorer.http.endpoint = e.clone();
        }
        if let Some(d) = &o.domain_filter {
            self.mix.domain_filter = Some(d.clone());
        }
        self.mix.shuffle_labels |= o.shuffle_labels;
        self.mix.augment_labeled |= o.augment;
        if let Some(t) = &o.templates {
            self.templates = Some(t.clone());
        }
        if !o.corpus.is_empty() {
            let domain = o.corpus_domain.unwrap_or(Domain::Other);
            self.corpus.sources = o
                .corpus
                .iter()
                .map(|p| SourceConfig { path: p.clone(), format: None, domain })
                .collect();
        }
        if !o.labeled.is_empty() {
            self.labeled = o.labeled.clone();
        }
        self.eval.per_token |= o.per_token;
        self.eval.dummy_fallback |= o.dummy_fallback;
        // one seed drives every stage
        self.constructors.seed = self.seed;
        self.mix.seed = self.seed;
    }

    pub fn check(&self) -> anyhow::Result<()> {
        if self.jobs == 0 {
            bail!("jobs must be at least 1");
        }
        if self.clusters.is_empty() {
            bail!("no clusters selected");
        }
        self.constructors.validate()?;
        self.mix.validate()?;
        Ok(())
    }

    /// The resolved config as echoed into manifests. `jobs` is left out
    /// because it never changes any output.
    pub fn echo(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(m) = v.as_object_mut() {
            m.remove("jobs");
        }
        v
    }
}
