//! Instruction templates and rendering into text-to-text pairs.
//!
//! Patterns use `{{field}}` placeholders and nothing else. A `{{` that is
//! not closed by `}}` is an error; single braces pass through untouched.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructors::{Cluster, ClusterSample, ParaLabel};
use crate::corpus::Domain;
use crate::textkit::Polarity;

/// Word budget for rendered inputs.
pub const INPUT_WORD_LIMIT: usize = 400;
/// Word budget for rendered targets of generation clusters.
pub const TARGET_WORD_LIMIT: usize = 100;

const ANSWER: &str = "{{answer}}";

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("reading templates from {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parsing templates: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("template {id}: placeholder {{{{{token}}}}} is not a {cluster} field")]
    UnknownField { id: String, token: String, cluster: Cluster },
    #[error("template {id}: unterminated placeholder in {pattern:?}")]
    Unterminated { id: String, pattern: String },
    #[error("duplicate template id {0}")]
    DuplicateId(String),
    #[error("template {id}: {reason}")]
    Invalid { id: String, reason: String },
    #[error("template {id} is for {expected}, sample is {found}")]
    ClusterMismatch { id: String, expected: Cluster, found: Cluster },
    #[error("template {id}: missing field {field}")]
    MissingField { id: String, field: String },
}

/// One instruction: how to turn a sample of `cluster` into input and target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstructionTemplate {
    pub id: String,
    pub cluster: Cluster,
    /// Restricts the template to one task. Unset means every task of the cluster.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<String>,
    pub input_pattern: String,
    /// Defaults to `{{answer}}` for classification clusters, required otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_pattern: Option<String>,
    /// Label verbalizers: `[Positive, Negative]` for SENT, `[yes, not]` for PARA.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer_choices: Option<Vec<String>>,
    /// Joins MCQA options and TC choices where `{{options}}`/`{{choices}}` appear.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options_separator: Option<String>,
    #[serde(default = "yes")]
    pub enabled: bool,
    /// Whether the template is also applied to pseudo-labeled samples.
    #[serde(default = "yes")]
    pub pseudo: bool,
}

fn yes() -> bool {
    true
}

impl InstructionTemplate {
    pub fn target(&self) -> Option<&str> {
        match &self.target_pattern {
            Some(p) => Some(p),
            None if self.cluster.is_classification() => Some(ANSWER),
            None => None,
        }
    }

    /// Whether this template renders samples of `task`.
    pub fn applies_to(&self, task: &str, origin: Origin) -> bool {
        self.enabled
            && (origin != Origin::Pseudo || self.pseudo)
            && self.task.as_deref().map_or(true, |t| t == task)
    }

    fn separator(&self) -> &str {
        self.options_separator.as_deref().unwrap_or(default_separator(self.cluster))
    }

    /// Checks placeholders against the cluster schema and the choice rules.
    pub fn validate(&self) -> Result<(), TemplateError> {
        let invalid = |reason: &str| TemplateError::Invalid {
            id: self.id.clone(),
            reason: reason.to_string(),
        };
        if self.id.trim().is_empty() {
            return Err(invalid("empty id"));
        }
        if self.input_pattern.trim().is_empty() {
            return Err(invalid("empty input pattern"));
        }
        let target = self.target().ok_or_else(|| invalid("missing target pattern"))?;
        if target.trim().is_empty() {
            return Err(invalid("empty target pattern"));
        }
        let fields = schema(self.cluster);
        for pattern in [self.input_pattern.as_str(), target] {
            for token in placeholders(pattern).map_err(|_| TemplateError::Unterminated {
                id: self.id.clone(),
                pattern: pattern.to_string(),
            })? {
                if !fields.contains(&token) {
                    return Err(TemplateError::UnknownField {
                        id: self.id.clone(),
                        token: token.to_string(),
                        cluster: self.cluster,
                    });
                }
            }
        }
        if self.cluster.is_classification() && target != ANSWER {
            return Err(invalid("classification targets must be {{answer}}"));
        }
        match (self.cluster, &self.answer_choices) {
            (Cluster::Sent | Cluster::Para, None) => return Err(invalid("answer_choices required")),
            (Cluster::Sent | Cluster::Para, Some(c)) => {
                if c.len() != 2 {
                    return Err(invalid("answer_choices must list exactly two labels"));
                }
                if c.iter().any(|x| x.trim().is_empty()) || c[0] == c[1] {
                    return Err(invalid("answer_choices must be distinct and non-empty"));
                }
            }
            (_, Some(_)) => return Err(invalid("answer_choices only apply to sent and para")),
            _ => {}
        }
        Ok(())
    }
}

fn default_separator(cluster: Cluster) -> &'static str {
    match cluster {
        Cluster::Tc => ", ",
        Cluster::S2t => ", ",
        _ => "\n",
    }
}

/// Field names each cluster exposes to patterns.
pub fn schema(cluster: Cluster) -> &'static [&'static str] {
    match cluster {
        Cluster::Mcqa => &["passage", "question", "options", "answer"],
        Cluster::Exqa => &["passage", "question", "answer"],
        Cluster::Cbqa => &["question", "answer"],
        Cluster::Sent => &["text", "answer"],
        Cluster::Tc => &["text", "choices", "answer"],
        Cluster::S2t => &["keywords", "text"],
        Cluster::Sum => &["document", "summary"],
        Cluster::Para => &["sentence1", "sentence2", "answer"],
    }
}

// Fields that may be shortened to fit the input budget.
const LONG_FIELDS: [&str; 3] = ["passage", "document", "text"];

/// Placeholder names in order of appearance.
pub fn placeholders(pattern: &str) -> Result<Vec<&str>, usize> {
    let mut out = Vec::new();
    let mut rest = pattern;
    let mut offset = 0;
    while let Some(open) = rest.find("{{") {
        let after = &rest[open + 2..];
        let close = after.find("}}").ok_or(offset + open)?;
        out.push(after[..close].trim());
        let consumed = open + 2 + close + 2;
        offset += consumed;
        rest = &rest[consumed..];
    }
    Ok(out)
}

fn substitute(pattern: &str, lookup: &dyn Fn(&str) -> Option<String>) -> Result<String, String> {
    let mut out = String::with_capacity(pattern.len() * 2);
    let mut rest = pattern;
    while let Some(open) = rest.find("{{") {
        out.push_str(&rest[..open]);
        let after = &rest[open + 2..];
        let close = after.find("}}").ok_or_else(|| "unterminated".to_string())?;
        let name = after[..close].trim();
        out.push_str(&lookup(name).ok_or_else(|| name.to_string())?);
        rest = &after[close + 2..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Parses a JSON array of templates, validates each, and rejects duplicate ids.
pub fn parse_templates(json: &str) -> Result<Vec<InstructionTemplate>, TemplateError> {
    let templates: Vec<InstructionTemplate> = serde_json::from_str(json)?;
    let mut seen = HashSet::new();
    for t in &templates {
        t.validate()?;
        if !seen.insert(t.id.as_str()) {
            return Err(TemplateError::DuplicateId(t.id.clone()));
        }
    }
    Ok(templates)
}

pub fn load_templates(path: &Path) -> Result<Vec<InstructionTemplate>, TemplateError> {
    let text = std::fs::read_to_string(path).map_err(|source| TemplateError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_templates(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Labeled,
    Pseudo,
    Augmented,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Labeled => "labeled",
            Origin::Pseudo => "pseudo",
            Origin::Augmented => "augmented",
        }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleMeta {
    pub cluster: Cluster,
    pub task: String,
    pub instruction_id: String,
    pub origin: Origin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
}

/// A rendered training or evaluation pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextToTextExample {
    pub id: String,
    pub input: String,
    pub target: String,
    /// Rendered choices for classification clusters; the target is one of them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer_choices: Option<Vec<String>>,
    pub meta: ExampleMeta,
}

/// A record from a labeled dataset: task name plus a sample in the cluster schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledRecord {
    pub id: String,
    pub task: String,
    #[serde(flatten)]
    pub sample: ClusterSample,
}

/// Provenance and context handed to [`render`].
#[derive(Debug, Clone, Copy)]
pub struct RenderContext<'a> {
    pub id: &'a str,
    pub task: &'a str,
    pub origin: Origin,
    pub doc_id: Option<&'a str>,
    pub domain: Option<Domain>,
    /// Closed label set, required for TC.
    pub label_set: Option<&'a [String]>,
    pub input_words: usize,
    pub target_words: usize,
}

impl<'a> RenderContext<'a> {
    pub fn new(id: &'a str, task: &'a str, origin: Origin) -> Self {
        RenderContext {
            id,
            task,
            origin,
            doc_id: None,
            domain: None,
            label_set: None,
            input_words: INPUT_WORD_LIMIT,
            target_words: TARGET_WORD_LIMIT,
        }
    }

    pub fn with_labels(mut self, labels: &'a [String]) -> Self {
        self.label_set = Some(labels);
        self
    }
}

struct Fields {
    values: Vec<(&'static str, String)>,
    choices: Option<Vec<String>>,
}

impl Fields {
    fn get(&self, name: &str) -> Option<String> {
        self.values.iter().find(|(k, _)| *k == name).map(|(_, v)| v.clone())
    }
}

// Values never reintroduce the meta-sequence.
fn clean(value: &str) -> String {
    let mut out = value.to_string();
    while out.contains("{{") {
        out = out.replace("{{", "{ {");
    }
    out
}

fn fields(t: &InstructionTemplate, sample: &ClusterSample, ctx: &RenderContext<'_>) -> Result<Fields, TemplateError> {
    let missing = |field: &str| TemplateError::MissingField {
        id: t.id.clone(),
        field: field.to_string(),
    };
    let sep = t.separator();
    let verbalize = |i: usize| -> Result<String, TemplateError> {
        let c = t.answer_choices.as_ref().ok_or_else(|| missing("answer_choices"))?;
        Ok(clean(&c[i]))
    };
    let (values, choices): (Vec<(&'static str, String)>, Option<Vec<String>>) = match sample {
        ClusterSample::Mcqa(s) => {
            if s.answer_index >= s.options.len() {
                return Err(missing("answer"));
            }
            let options: Vec<String> = s.options.iter().map(|o| clean(o)).collect();
            (
                vec![
                    ("passage", clean(&s.passage)),
                    ("question", clean(&s.question)),
                    ("options", options.join(sep)),
                    ("answer", options[s.answer_index].clone()),
                ],
                Some(options),
            )
        }
        ClusterSample::Exqa(s) => (
            vec![("passage", clean(&s.passage)), ("question", clean(&s.question)), ("answer", clean(&s.answer))],
            None,
        ),
        ClusterSample::Cbqa(s) => (vec![("question", clean(&s.question)), ("answer", clean(&s.answer))], None),
        ClusterSample::Sent(s) => {
            let gold = match s.label {
                Polarity::Positive => 0,
                Polarity::Negative => 1,
            };
            let choices = vec![verbalize(0)?, verbalize(1)?];
            (vec![("text", clean(&s.text)), ("answer", choices[gold].clone())], Some(choices))
        }
        ClusterSample::Tc(s) => {
            let labels = ctx.label_set.ok_or_else(|| missing("label set"))?;
            if !labels.contains(&s.label) {
                return Err(missing("answer"));
            }
            let choices: Vec<String> = labels.iter().map(|l| clean(l)).collect();
            (
                vec![("text", clean(&s.text)), ("choices", choices.join(sep)), ("answer", clean(&s.label))],
                Some(choices),
            )
        }
        ClusterSample::S2t(s) => {
            let kw: Vec<String> = s.keywords.iter().map(|k| clean(k)).collect();
            (vec![("keywords", kw.join(sep)), ("text", clean(&s.text))], None)
        }
        ClusterSample::Sum(s) => (vec![("document", clean(&s.document)), ("summary", clean(&s.summary))], None),
        ClusterSample::Para(s) => {
            let gold = match s.label {
                ParaLabel::Yes => 0,
                ParaLabel::Not => 1,
            };
            let choices = vec![verbalize(0)?, verbalize(1)?];
            (
                vec![
                    ("sentence1", clean(&s.sentence1)),
                    ("sentence2", clean(&s.sentence2)),
                    ("answer", choices[gold].clone()),
                ],
                Some(choices),
            )
        }
    };
    Ok(Fields { values, choices })
}

fn word_count(s: &str) -> usize {
    s.split_whitespace().count()
}

/// Keeps the first `n` whitespace-separated words, preserving the original
/// spacing between them.
pub fn truncate_words(s: &str, n: usize) -> &str {
    if n == 0 {
        return "";
    }
    let mut seen = 0;
    let mut in_word = false;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() {
            if in_word {
                seen += 1;
                if seen == n {
                    return &s[..i];
                }
            }
            in_word = false;
        } else {
            in_word = true;
        }
    }
    s.trim_end()
}

/// Renders one sample through one template.
pub fn render(t: &InstructionTemplate, sample: &ClusterSample, ctx: &RenderContext<'_>) -> Result<TextToTextExample, TemplateError> {
    if sample.cluster() != t.cluster {
        return Err(TemplateError::ClusterMismatch {
            id: t.id.clone(),
            expected: t.cluster,
            found: sample.cluster(),
        });
    }
    let target_pattern = t.target().ok_or_else(|| TemplateError::Invalid {
        id: t.id.clone(),
        reason: "missing target pattern".into(),
    })?;
    let mut f = fields(t, sample, ctx)?;
    let missing = |field: String| TemplateError::MissingField { id: t.id.clone(), field };

    let mut input = substitute(&t.input_pattern, &|k| f.get(k)).map_err(missing)?;
    // Shrink the longest long field until the input fits, one field at a time.
    let mut shrunk = BTreeSet::new();
    while word_count(&input) > ctx.input_words {
        let over = word_count(&input) - ctx.input_words;
        let used = placeholders(&t.input_pattern).unwrap_or_default();
        let Some((idx, len)) = f
            .values
            .iter()
            .enumerate()
            .filter(|(_, (k, _))| LONG_FIELDS.contains(k) && used.contains(k) && !shrunk.contains(*k))
            .map(|(i, (_, v))| (i, word_count(v)))
            .max_by_key(|&(i, len)| (len, std::cmp::Reverse(i)))
        else {
            break;
        };
        let keep = len.saturating_sub(over);
        let cut = truncate_words(&f.values[idx].1, keep).to_string();
        shrunk.insert(f.values[idx].0);
        f.values[idx].1 = cut;
        input = substitute(&t.input_pattern, &|k| f.get(k)).map_err(missing)?;
    }

    let mut target = substitute(target_pattern, &|k| f.get(k)).map_err(missing)?;
    if !t.cluster.is_classification() && word_count(&target) > ctx.target_words {
        target = truncate_words(&target, ctx.target_words).to_string();
    }
    if input.trim().is_empty() || target.trim().is_empty() {
        return Err(TemplateError::Invalid {
            id: t.id.clone(),
            reason: "rendered to an empty input or target".into(),
        });
    }
    Ok(TextToTextExample {
        id: format!("{}#{}", ctx.id, t.id),
        input,
        target,
        answer_choices: f.choices.take(),
        meta: ExampleMeta {
            cluster: t.cluster,
            task: ctx.task.to_string(),
            instruction_id: t.id.clone(),
            origin: ctx.origin,
            doc_id: ctx.doc_id.map(str::to_string),
            domain: ctx.domain,
        },
    })
}

/// A schema-complete sample for `cluster` with placeholder-looking content.
pub fn synthetic_sample(cluster: Cluster) -> ClusterSample {
    use crate::constructors::*;
    match cluster {
        Cluster::Mcqa => ClusterSample::Mcqa(McqaSample {
            passage: "Tom fed the dog.".into(),
            question: "The dog ate _?".into(),
            options: vec!["meat".into(), "Tom".into(), "dog".into(), "bowl".into()],
            answer_index: 0,
            method: McqaMethod::Cloze,
        }),
        Cluster::Exqa => ClusterSample::Exqa(ExqaSample {
            passage: "It lies south of Liniewo.".into(),
            question: "Where it lies south of?".into(),
            answer: "Liniewo".into(),
            answer_char_span: (17, 24),
        }),
        Cluster::Cbqa => ClusterSample::Cbqa(CbqaSample {
            question: "Where it lies south of?".into(),
            answer: "Liniewo".into(),
            source_exqa_id: String::new(),
        }),
        Cluster::Sent => ClusterSample::Sent(SentSample {
            text: "The food was superb.".into(),
            label: Polarity::Positive,
            score: 1.5,
        }),
        Cluster::Tc => ClusterSample::Tc(TcSample {
            text: "The team won the final.".into(),
            label: "sports".into(),
        }),
        Cluster::S2t => ClusterSample::S2t(S2tSample {
            keywords: vec!["team".into(), "final".into()],
            text: "The team won the final.".into(),
        }),
        Cluster::Sum => ClusterSample::Sum(SumSample {
            document: "The team won the final. Fans cheered.".into(),
            summary: "Team wins final".into(),
            kind: SumKind::Lsg,
        }),
        Cluster::Para => ClusterSample::Para(ParaSample {
            sentence1: "The soup was hot.".into(),
            sentence2: "The soup was cold.".into(),
            label: ParaLabel::Not,
            perturbation: Some(Perturbation::Antonym),
            perturbed: None,
        }),
    }
}

/// Renders a synthetic sample and reports every problem found.
pub fn validate_template_roundtrip(t: &InstructionTemplate) -> Result<(), Vec<String>> {
    let mut problems = Vec::new();
    if let Err(e) = t.validate() {
        problems.push(e.to_string());
    }
    let labels = vec!["sports".to_string(), "politics".to_string()];
    let ctx = RenderContext::new("synthetic", "synthetic", Origin::Labeled).with_labels(&labels);
    match render(t, &synthetic_sample(t.cluster), &ctx) {
        Ok(ex) => {
            if ex.input.contains("{{") || ex.target.contains("{{") {
                problems.push(format!("template {}: unresolved placeholder", t.id));
            }
            if ex.target.trim().is_empty() {
                problems.push(format!("template {}: empty target", t.id));
            }
        }
        Err(e) => problems.push(e.to_string()),
    }
    if problems.is_empty() {
        Ok(())
    } else {
        problems.dedup();
        Err(problems)
    }
}
