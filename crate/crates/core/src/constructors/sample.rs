use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Domain;
use crate::textkit::Polarity;

/// The eight training task clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cluster {
    Mcqa,
    Exqa,
    Cbqa,
    Sent,
    Tc,
    S2t,
    Sum,
    Para,
}

impl Cluster {
    pub const ALL: [Cluster; 8] = [
        Cluster::Mcqa,
        Cluster::Exqa,
        Cluster::Cbqa,
        Cluster::Sent,
        Cluster::Tc,
        Cluster::S2t,
        Cluster::Sum,
        Cluster::Para,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Cluster::Mcqa => "mcqa",
            Cluster::Exqa => "exqa",
            Cluster::Cbqa => "cbqa",
            Cluster::Sent => "sent",
            Cluster::Tc => "tc",
            Cluster::S2t => "s2t",
            Cluster::Sum => "sum",
            Cluster::Para => "para",
        }
    }

    /// Clusters whose targets are chosen from a closed set of answers.
    pub fn is_classification(self) -> bool {
        matches!(self, Cluster::Mcqa | Cluster::Sent | Cluster::Tc | Cluster::Para)
    }

    /// Task name used for pseudo-labeled data of this cluster.
    pub fn pseudo_task(self) -> String {
        format!("pseudo_{}", self.as_str())
    }
}

impl fmt::Display for Cluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Cluster {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Cluster::ALL
            .into_iter()
            .find(|c| c.as_str() == lower)
            .ok_or_else(|| format!("unknown cluster {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McqaMethod {
    Cloze,
    MinedQuestion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McqaSample {
    pub passage: String,
    pub question: String,
    pub options: Vec<String>,
    pub answer_index: usize,
    #[serde(default = "default_method")]
    pub method: McqaMethod,
}

fn default_method() -> McqaMethod {
    McqaMethod::MinedQuestion
}

impl McqaSample {
    pub fn answer(&self) -> &str {
        &self.options[self.answer_index]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExqaSample {
    pub passage: String,
    pub question: String,
    pub answer: String,
    /// Character (not byte) offsets of the answer in the passage.
    pub answer_char_span: (usize, usize),
}

impl ExqaSample {
    /// Byte range of the answer, derived from the character span.
    pub fn answer_byte_range(&self) -> Option<std::ops::Range<usize>> {
        let mut indices = self.passage.char_indices().map(|(i, _)| i).chain(std::iter::once(self.passage.len()));
        let start = indices.nth(self.answer_char_span.0)?;
        let len = self.answer_char_span.1.checked_sub(self.answer_char_span.0)?;
        let end = if len == 0 { start } else { indices.nth(len - 1)? };
        Some(start..end)
    }

    /// Whether the passage slice at the span equals the answer.
    pub fn span_is_sound(&self) -> bool {
        self.answer_byte_range()
            .is_some_and(|r| self.passage.get(r).is_some_and(|s| s == self.answer))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CbqaSample {
    pub question: String,
    pub answer: String,
    #[serde(default)]
    pub source_exqa_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentSample {
    pub text: String,
    pub label: Polarity,
    #[serde(default)]
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcSample {
    pub text: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct S2tSample {
    pub keywords: Vec<String>,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SumKind {
    Lsg,
    Gsg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumSample {
    pub document: String,
    pub summary: String,
    #[serde(default = "default_sum_kind")]
    pub kind: SumKind,
}

fn default_sum_kind() -> SumKind {
    SumKind::Lsg
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParaLabel {
    Yes,
    Not,
}

impl ParaLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ParaLabel::Yes => "yes",
            ParaLabel::Not => "not",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Perturbation {
    Antonym,
    NounShuffle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParaSample {
    pub sentence1: String,
    pub sentence2: String,
    pub label: ParaLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<Perturbation>,
    /// The perturbed source sentence before paraphrasing (negatives only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbed: Option<String>,
}

/// One pseudo-labeled (or labeled) sample of any cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "cluster", rename_all = "lowercase")]
pub enum ClusterSample {
    Mcqa(McqaSample),
    Exqa(ExqaSample),
    Cbqa(CbqaSample),
    Sent(SentSample),
    Tc(TcSample),
    S2t(S2tSample),
    Sum(SumSample),
    Para(ParaSample),
}

impl ClusterSample {
    pub fn cluster(&self) -> Cluster {
        match self {
            ClusterSample::Mcqa(_) => Cluster::Mcqa,
            ClusterSample::Exqa(_) => Cluster::Exqa,
            ClusterSample::Cbqa(_) => Cluster::Cbqa,
            ClusterSample::Sent(_) => Cluster::Sent,
            ClusterSample::Tc(_) => Cluster::Tc,
            ClusterSample::S2t(_) => Cluster::S2t,
            ClusterSample::Sum(_) => Cluster::Sum,
            ClusterSample::Para(_) => Cluster::Para,
        }
    }
}

/// A cluster sample with provenance, as written to the per-cluster JSONL.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoSample {
    pub id: String,
    pub doc_id: String,
    pub domain: Domain,
    pub constructor: String,
    pub seed: u64,
    #[serde(flatten)]
    pub sample: ClusterSample,
}

impl PseudoSample {
    pub fn cluster(&self) -> Cluster {
        self.sample.cluster()
    }
}
