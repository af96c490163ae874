//! Corpus ingestion: streaming, normalization and sampling of documents.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::seed;

/// Paragraph separator emitted by [`normalize`].
pub const PARAGRAPH_SEPARATOR: &str = "\n\n";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown domain tag {0:?}")]
    UnknownDomain(String),
    #[error("unknown source format {0:?}")]
    UnknownFormat(String),
}

/// Source domain of a document. Carried into every derived sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Books,
    News,
    Web,
    Encyclopedia,
    Reviews,
    Other,
}

impl Domain {
    pub const ALL: [Domain; 6] = [
        Domain::Books,
        Domain::News,
        Domain::Web,
        Domain::Encyclopedia,
        Domain::Reviews,
        Domain::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Books => "books",
            Domain::News => "news",
            Domain::Web => "web",
            Domain::Encyclopedia => "encyclopedia",
            Domain::Reviews => "reviews",
            Domain::Other => "other",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Domain {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Domain::ALL
            .into_iter()
            .find(|d| d.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| CorpusError::UnknownDomain(s.to_string()))
    }
}

/// One unit of normalized corpus text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub text: String,
}

impl Document {
    /// Builds a document, normalizing `text`. Mostly useful in tests.
    pub fn new(id: impl Into<String>, domain: Domain, text: &str) -> Self {
        Document {
            id: id.into(),
            domain,
            url: None,
            title: None,
            text: normalize(text),
        }
    }

    pub fn with_url(mut self, url: impl Into<String>) -> Self {
        self.url = Some(url.into());
        self
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceFormat {
    Jsonl,
    PlainTextDir,
}

impl FromStr for SourceFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(SourceFormat::Jsonl),
            "plain_text_dir" | "text" | "txt" => Ok(SourceFormat::PlainTextDir),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct IngestOptions {
    /// Documents shorter than this many characters after normalization are rejected.
    pub min_chars: usize,
    /// Exact-hash deduplication over normalized text within one stream.
    pub dedup: bool,
    /// Stop yielding once this many bytes of text have been yielded.
    pub byte_quota: Option<u64>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            min_chars: 200,
            dedup: false,
            byte_quota: None,
        }
    }
}

/// Per-source counters. `count` always equals the number of documents yielded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceStats {
    pub path: String,
    pub domain: Domain,
    pub count: u64,
    pub rejected: u64,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub sources: Vec<SourceStats>,
    pub normalization: IngestOptions,
    pub content_hash: String,
}

/// Accumulates finished streams into a [`CorpusManifest`].
#[derive(Debug)]
pub struct ManifestBuilder {
    options: IngestOptions,
    sources: Vec<SourceStats>,
    hasher: Sha256,
}

impl ManifestBuilder {
    pub fn new(options: IngestOptions) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(&options).expect("options serialize"));
        ManifestBuilder {
            options,
            sources: Vec::new(),
            hasher,
        }
    }

    pub fn add(&mut self, summary: StreamSummary) {
        self.hasher.update(summary.digest);
        self.sources.push(summary.stats);
    }

    pub fn finish(self) -> CorpusManifest {
        CorpusManifest {
            sources: self.sources,
            normalization: self.options,
            content_hash: hex::encode(self.hasher.finalize()),
        }
    }
}

/// Final state of a drained [`DocumentStream`].
#[derive(Debug, Clone)]
pub struct StreamSummary {
    pub stats: SourceStats,
    pub digest: [u8; 32],
}

#[derive(Debug, Deserialize)]
struct JsonlRecord {
    text: String,
    #[serde(default)]
    url: Option<String>,
    #[serde(default)]
    title: Option<String>,
}

enum Cursor {
    Idle,
    Jsonl {
        name: String,
        path: PathBuf,
        reader: BufReader<File>,
        index: usize,
    },
}

/// Lazily reads documents from one source, in lexicographic file order and
/// then record order.
pub struct DocumentStream {
    root: PathBuf,
    format: SourceFormat,
    domain: Domain,
    options: IngestOptions,
    files: std::vec::IntoIter<PathBuf>,
    cursor: Cursor,
    stats: SourceStats,
    hasher: Sha256,
    seen: HashSet<[u8; 32]>,
    failed: bool,
}

/// Opens a source for streaming. `path` may be a single file or a directory.
pub fn ingest(
    path: impl AsRef<Path>,
    format: SourceFormat,
    domain: Domain,
    options: IngestOptions,
) -> Result<DocumentStream, CorpusError> {
    let root = path.as_ref().to_path_buf();
    let files = list_files(&root, format)?;
    Ok(DocumentStream {
        stats: SourceStats {
            path: root.display().to_string(),
            domain,
            count: 0,
            rejected: 0,
            bytes: 0,
        },
        root,
        format,
        domain,
        options,
        files: files.into_iter(),
        cursor: Cursor::Idle,
        hasher: Sha256::new(),
        seen: HashSet::new(),
        failed: false,
    })
}

fn io_err(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn list_files(root: &Path, format: SourceFormat) -> Result<Vec<PathBuf>, CorpusError> {
    let meta = std::fs::metadata(root).map_err(|e| io_err(root, e))?;
    if meta.is_file() {
        return Ok(vec![root.to_path_buf()]);
    }
    let mut out = Vec::new();
    let mut pending = vec![root.to_path_buf()];
    while let Some(dir) = pending.pop() {
        for entry in std::fs::read_dir(&dir).map_err(|e| io_err(&dir, e))? {
            let entry = entry.map_err(|e| io_err(&dir, e))?;
            let path = entry.path();
            let ty = entry.file_type().map_err(|e| io_err(&path, e))?;
            if ty.is_dir() {
                pending.push(path);
            } else if match format {
                SourceFormat::Jsonl => path.extension().is_some_and(|e| e == "jsonl"),
                SourceFormat::PlainTextDir => !path
                    .file_name()
                    .is_some_and(|n| n.to_string_lossy().starts_with('.')),
            } {
                out.push(path);
            }
        }
    }
    out.sort();
    Ok(out)
}

impl DocumentStream {
    pub fn stats(&self) -> &SourceStats {
        &self.stats
    }

    /// Drains nothing further; returns the counters and stream digest.
    pub fn finish(self) -> StreamSummary {
        StreamSummary {
            stats: self.stats,
            digest: self.hasher.finalize().into(),
        }
    }

    fn file_name(&self, path: &Path) -> String {
        let rel = path.strip_prefix(&self.root).unwrap_or(path);
        let rel = if rel.as_os_str().is_empty() {
            path.file_name().map(Path::new).unwrap_or(path)
        } else {
            rel
        };
        rel.to_string_lossy().replace('\\', "/")
    }

    fn quota_reached(&self) -> bool {
        self.options
            .byte_quota
            .is_some_and(|quota| self.stats.bytes >= quota)
    }

    /// Applies the length and dedup gates; `None` means rejected.
    fn admit(&mut self, name: &str, index: usize, text: &str, url: Option<String>, title: Option<String>) -> Option<Document> {
        let text = normalize(text);
        if text.is_empty() || text.chars().count() < self.options.min_chars {
            self.stats.rejected += 1;
            return None;
        }
        if self.options.dedup {
            let digest: [u8; 32] = Sha256::digest(text.as_bytes()).into();
            if !self.seen.insert(digest) {
                self.stats.rejected += 1;
                return None;
            }
        }
        let doc = Document {
            id: format!("{}:{}:{}", self.domain, name, index),
            domain: self.domain,
            url: url.map(|u| u.trim().to_string()).filter(|u| !u.is_empty()),
            title: title.map(|t| normalize(&t)).filter(|t| !t.is_empty()),
            text,
        };
        self.stats.count += 1;
        self.stats.bytes += doc.text.len() as u64;
        self.hasher.update(doc.id.as_bytes());
        self.hasher.update([0]);
        self.hasher.update(doc.text.as_bytes());
        self.hasher.update([0]);
        Some(doc)
    }
}

impl Iterator for DocumentStream {
    type Item = Result<Document, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            if self.quota_reached() {
                return None;
            }
            match &mut self.cursor {
                Cursor::Idle => {
                    let path = self.files.next()?;
                    let name = self.file_name(&path);
                    match self.format {
                        SourceFormat::Jsonl => match File::open(&path) {
                            Ok(file) => {
                                self.cursor = Cursor::Jsonl {
                                    name,
                                    path,
                                    reader: BufReader::new(file),
                                    index: 0,
                                }
                            }
                            Err(e) => {
                                self.failed = true;
                                return Some(Err(io_err(&path, e)));
                            }
                        },
                        SourceFormat::PlainTextDir => {
                            let mut bytes = Vec::new();
                            if let Err(e) = File::open(&path).and_then(|mut f| f.read_to_end(&mut bytes)) {
                                self.failed = true;
                                return Some(Err(io_err(&path, e)));
                            }
                            let Ok(text) = String::from_utf8(bytes) else {
                                self.stats.rejected += 1;
                                continue;
                            };
                            if let Some(doc) = self.admit(&name, 0, &text, None, None) {
                                return Some(Ok(doc));
                            }
                        }
                    }
                }
                Cursor::Jsonl { name, path, reader, index } => {
                    let mut line = Vec::new();
                    match reader.read_until(b'\n', &mut line) {
                        Ok(0) => {
                            self.cursor = Cursor::Idle;
                            continue;
                        }
                        Ok(_) => {}
                        Err(e) => {
                            let err = io_err(path, e);
                            self.failed = true;
                            return Some(Err(err));
                        }
                    }
                    if line.iter().all(|b| b.is_ascii_whitespace()) {
                        continue;
                    }
                    let record_index = *index;
                    *index += 1;
                    let name = name.clone();
                    let record = std::str::from_utf8(&line)
                        .ok()
                        .and_then(|s| serde_json::from_str::<JsonlRecord>(s).ok());
                    match record {
                        Some(rec) => {
                            if let Some(doc) = self.admit(&name, record_index, &rec.text, rec.url, rec.title) {
                                return Some(Ok(doc));
                            }
                        }
                        None => self.stats.rejected += 1,
                    }
                }
            }
        }
    }
}

/// Collapses whitespace, keeps paragraph breaks and strips control characters.
///
/// Runs of whitespace containing two or more newlines become
/// [`PARAGRAPH_SEPARATOR`]; every other run becomes a single space. Leading
/// and trailing whitespace is dropped. The function is idempotent.
pub fn normalize(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_ws = false;
    let mut newlines = 0usize;
    let mut chars = raw.chars().peekable();
    while let Some(c) = chars.next() {
        let c = if c == '\r' {
            if chars.peek() == Some(&'\n') {
                continue;
            }
            '\n'
        } else {
            c
        };
        if c.is_whitespace() {
            pending_ws = true;
            if c == '\n' || c == '\u{2029}' {
                newlines += 1;
            }
            continue;
        }
        if c.is_control() || matches!(c, '\u{200b}' | '\u{feff}') {
            continue;
        }
        if pending_ws && !out.is_empty() {
            out.push_str(if newlines >= 2 { PARAGRAPH_SEPARATOR } else { " " });
        }
        pending_ws = false;
        newlines = 0;
        out.push(c);
    }
    out
}

/// Reservoir-samples `n` documents, returned in stream order.
pub fn sample_documents<I>(stream: I, n: usize, seed: u64) -> Vec<Document>
where
    I: IntoIterator<Item = Document>,
{
    if n == 0 {
        return Vec::new();
    }
    let mut rng = seed::rng_for(seed, &["sample_documents"]);
    let mut reservoir: Vec<(usize, Document)> = Vec::with_capacity(n);
    for (i, doc) in stream.into_iter().enumerate() {
        if reservoir.len() < n {
            reservoir.push((i, doc));
        } else {
            let j = rng.gen_range(0..=i);
            if j < n {
                reservoir[j] = (i, doc);
            }
        }
    }
    reservoir.sort_by_key(|(i, _)| *i);
    reservoir.into_iter().map(|(_, d)| d).collect()
}
