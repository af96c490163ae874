//! Command-line front end: `build`, `mix`, `eval`, `inspect` and `stats`.
//!
//! [`run`] parses arguments and returns the process exit code, so the whole
//! surface can be driven in-process from tests.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pseudotune::mixer::Scenario;
use pseudotune::{Cluster, Domain};

pub mod commands;
pub mod config;
pub mod io;

use config::{Overrides, RunConfig, ScorerKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_BACKEND: i32 = 3;

/// A command failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_USAGE, error: e.into() }
}

pub fn data(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_DATA, error: e.into() }
}

pub fn backend(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_BACKEND, error: e.into() }
}

#[derive(Debug, Parser)]
#[command(name = "pseudotune", version, about = "Build, mix and evaluate pseudo-labeled instruction-tuning data")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_cluster(s: &str) -> Result<Cluster, String> {
    s.parse()
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse()
}

fn parse_domain(s: &str) -> Result<Domain, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML or JSON run config; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated clusters to construct and mix.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_cluster)]
    pub clusters: Option<Vec<Cluster>>,
    /// no_labeled, few_tasks, few_datasets, few_samples or full.
    #[arg(long, global = true, value_parser = parse_scenario)]
    pub scenario: Option<Scenario>,
    #[arg(long, global = true, value_enum)]
    pub scorer: Option<ScorerKind>,
    /// Base URL of the scoring server.
    #[arg(long, global = true, env = "SCORER_ENDPOINT")]
    pub endpoint: Option<String>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Comma-separated source domains allowed into pseudo-labeled data.
    #[arg(long = "domain-filter", global = true, value_delimiter = ',', value_parser = parse_domain)]
    pub domain_filter: Option<Vec<Domain>>,
    /// Replace classification targets with random labels.
    #[arg(long = "shuffle-labels", global = true)]
    pub shuffle_labels: bool,
    /// Add paraphrased copies of the labeled examples.
    #[arg(long, global = true)]
    pub augment: bool,
    /// Instruction template file (JSON).
    #[arg(long, global = true)]
    pub templates: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct pseudo-labeled samples from the corpus.
    Build {
        /// Corpus file or directory; replaces the configured sources.
        #[arg(long)]
        corpus: Vec<PathBuf>,
        /// Domain of the --corpus sources.
        #[arg(long, value_parser = parse_domain)]
        domain: Option<Domain>,
    },
    /// Render, cap and mix labeled and pseudo-labeled data.
    Mix {
        /// Labeled-record files or directories; replaces the configured ones.
        #[arg(long)]
        labeled: Vec<PathBuf>,
    },
    /// Score evaluation tasks and write a report.
    Eval {
        /// Labeled-record files or directories to evaluate.
        #[arg(long)]
        tasks: Vec<PathBuf>,
        /// Rendered examples to evaluate, e.g. a mixed valid.jsonl.
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Normalize log-likelihoods by option length.
        #[arg(long)]
        per_token: bool,
        /// Use the dummy scorer if the HTTP backend is unreachable.
        #[arg(long)]
        dummy_fallback: bool,
    },
    /// Print a few records of a JSONL file.
    Inspect {
        file: PathBuf,
        #[arg(short = 'n', long, default_value_t = 3)]
        n: usize,
    },
    /// Count records per cluster, task and origin.
    Stats {
        /// File or directory; defaults to the output directory.
        path: Option<PathBuf>,
    },
}

fn resolve(cli: &Cli) -> Result<RunConfig, Failure> {
    let g = &cli.global;
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p).map_err(usage)?,
        None => RunConfig::default(),
    };
    let mut o = Overrides {
        seed: g.seed,
        out: g.out.clone(),
        jobs: g.jobs,
        clusters: g.clusters.clone(),
        scenario: g.scenario,
        scorer: g.scorer,
        endpoint: g.endpoint.clone(),
        domain_filter: g.domain_filter.clone(),
        shuffle_labels: g.shuffle_labels,
        augment: g.augment,
        templates: g.templates.clone(),
        ..Default::default()
    };
    match &cli.command {
        Command::Build { corpus, domain } => {
            o.corpus = corpus.clone();
            o.corpus_domain = *domain;
        }
        Command::Mix { labeled } => o.labeled = labeled.clone(),
        Command::Eval { tasks, dataset, per_token, dummy_fallback } => {
            o.per_token = *per_token;
            o.dummy_fallback = *dummy_fallback;
            if !tasks.is_empty() {
                cfg.eval.tasks = tasks.clone();
            }
            if dataset.is_some() {
                cfg.eval.dataset = dataset.clone();
            }
        }
        _ => {}
    }
    cfg.apply(&o);
    cfg.check().map_err(usage)?;
    Ok(cfg)
}

/// Runs one command line, writing reports to `out`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = resolve(&cli).and_then(|cfg| match &cli.command {
        Command::Build { .. } => commands::build(&cfg, out),
        Command::Mix { .. } => commands::mix(&cfg, out),
        Command::Eval { .. } => commands::eval(&cfg, out),
        Command::Inspect { file, n } => commands::inspect(file, *n, cfg.seed, out),
        Command::Stats { path } => commands::stats(path.as_deref().unwrap_or(&cfg.out), out),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {f}");
            f.code
        }
    }
}

/// [`run_with`] on standard output.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with(args, &mut lock)
}
