use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{ScorerBackend, ScorerError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HttpScorerConfig {
    /// Base URL; `/score` and `/generate` are appended.
    pub endpoint: String,
    /// Concurrent requests per batch.
    pub batch_size: usize,
    pub retries: u32,
    pub backoff_ms: u64,
    /// Per-request timeout.
    pub timeout_ms: u64,
    pub max_tokens: usize,
}

impl Default for HttpScorerConfig {
    fn default() -> Self {
        HttpScorerConfig {
            endpoint: "http://127.0.0.1:8080".into(),
            batch_size: 8,
            retries: 2,
            backoff_ms: 100,
            timeout_ms: 30_000,
            max_tokens: 128,
        }
    }
}

#[derive(Serialize)]
struct ScoreRequest<'a> {
    input: &'a str,
    target: &'a str,
}

#[derive(Deserialize)]
struct ScoreResponse {
    log_likelihood: f64,
}

#[derive(Serialize)]
struct GenerateRequest<'a> {
    input: &'a str,
    max_tokens: usize,
}

#[derive(Deserialize)]
struct GenerateResponse {
    text: String,
}

/// Scorer backed by a model server speaking the `/score` and `/generate`
/// JSON protocol.
pub struct HttpScorer {
    cfg: HttpScorerConfig,
    agent: ureq::Agent,
    retries_used: AtomicUsize,
}

enum Attempt<T> {
    Done(T),
    Retry(String),
    Fatal(ScorerError),
}

impl HttpScorer {
    pub fn new(cfg: HttpScorerConfig) -> Self {
        let agent = ureq::AgentBuilder::new().timeout(Duration::from_millis(cfg.timeout_ms)).build();
        HttpScorer { cfg, agent, retries_used: AtomicUsize::new(0) }
    }

    /// Retries performed so far.
    pub fn retries_used(&self) -> usize {
        self.retries_used.load(Ordering::Relaxed)
    }

    fn url(&self, path: &str) -> String {
        format!("{}/{}", self.cfg.endpoint.trim_end_matches('/'), path)
    }

    fn post<Req: Serialize, Resp: for<'de> Deserialize<'de>>(&self, path: &str, body: &Req) -> Result<Resp, ScorerError> {
        let url = self.url(path);
        let attempts = self.cfg.retries + 1;
        let mut last = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                self.retries_used.fetch_add(1, Ordering::Relaxed);
                thread::sleep(Duration::from_millis(self.cfg.backoff_ms << (attempt - 1).min(10)));
            }
            let outcome = match self.agent.post(&url).send_json(body) {
                Ok(resp) => match resp.into_string() {
                    Ok(text) => match serde_json::from_str::<Resp>(&text) {
                        Ok(v) => Attempt::Done(v),
                        Err(e) => Attempt::Fatal(ScorerError::Protocol(format!("{url}: {e}"))),
                    },
                    Err(e) => Attempt::Retry(e.to_string()),
                },
                Err(ureq::Error::Status(code, _)) if code >= 500 || code == 429 => Attempt::Retry(format!("HTTP {code}")),
                Err(ureq::Error::Status(code, _)) => Attempt::Fatal(ScorerError::Protocol(format!("{url}: HTTP {code}"))),
                Err(e) => Attempt::Retry(e.to_string()),
            };
            match outcome {
                Attempt::Done(v) => return Ok(v),
                Attempt::Fatal(e) => return Err(e),
                Attempt::Retry(msg) => {
                    log::debug!("{url} attempt {} failed: {msg}", attempt + 1);
                    last = msg;
                }
            }
        }
        Err(ScorerError::Backend { attempts, message: last })
    }
}

impl ScorerBackend for HttpScorer {
    fn score(&self, input: &str, target: &str) -> Result<f64, ScorerError> {
        let resp: ScoreResponse = self.post("score", &ScoreRequest { input, target })?;
        if !resp.log_likelihood.is_finite() {
            return Err(ScorerError::NonFinite);
        }
        Ok(resp.log_likelihood)
    }

    /// Sends up to `batch_size` requests at a time.
    fn score_batch(&self, pairs: &[(&str, &str)]) -> Vec<Result<f64, ScorerError>> {
        let mut out = Vec::with_capacity(pairs.len());
        for chunk in pairs.chunks(self.cfg.batch_size.max(1)) {
            let results: Vec<Result<f64, ScorerError>> = thread::scope(|s| {
                let handles: Vec<_> = chunk.iter().map(|(i, t)| s.spawn(move || self.score(i, t))).collect();
                handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(ScorerError::Protocol("worker panicked".into())))).collect()
            });
            out.extend(results);
        }
        out
    }

    fn generate(&self, input: &str) -> Result<String, ScorerError> {
        let resp: GenerateResponse = self.post("generate", &GenerateRequest { input, max_tokens: self.cfg.max_tokens })?;
        Ok(resp.text)
    }
}
