//! Zero-shot evaluation: rank classification by log-likelihood, Rouge-L for
//! generation, and aggregation across instructions.

mod dummy;
mod http;
mod rouge;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructors::Cluster;
use crate::templating::{render, InstructionTemplate, LabeledRecord, Origin, RenderContext, TemplateError, TextToTextExample};
use crate::textkit::words_lower;

pub use dummy::{dummy_score, DummyScorer, EMPTY_TARGET_SCORE};
pub use http::{HttpScorer, HttpScorerConfig};
pub use rouge::{rouge_l, rouge_l_tokens};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScorerError {
    #[error("backend failed after {attempts} attempt(s): {message}")]
    Backend { attempts: u32, message: String },
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("backend returned a non-finite score")]
    NonFinite,
    #[error("backend does not support generation")]
    Unsupported,
    #[error("need at least two distinct options")]
    InvalidOptions,
}

/// A model that scores targets given inputs. Higher is more likely.
pub trait ScorerBackend: Send + Sync {
    fn score(&self, input: &str, target: &str) -> Result<f64, ScorerError>;

    fn score_batch(&self, pairs: &[(&str, &str)]) -> Vec<Result<f64, ScorerError>> {
        pairs.iter().map(|(i, t)| self.score(i, t)).collect()
    }

    /// Greedy generation, needed for Rouge-L tasks.
    fn generate(&self, _input: &str) -> Result<String, ScorerError> {
        Err(ScorerError::Unsupported)
    }
}

/// Index of the largest score; the first one wins ties.
pub fn argmax_first(scores: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &s) in scores.iter().enumerate() {
        if best.map_or(true, |(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

/// Picks the option the scorer finds most likely. With `per_token` each score
/// is divided by the option's token count.
pub fn rank_classify(scorer: &dyn ScorerBackend, input: &str, options: &[String], per_token: bool) -> Result<usize, ScorerError> {
    if options.len() < 2 {
        return Err(ScorerError::InvalidOptions);
    }
    for (i, a) in options.iter().enumerate() {
        if options[..i].contains(a) {
            return Err(ScorerError::InvalidOptions);
        }
    }
    let pairs: Vec<(&str, &str)> = options.iter().map(|o| (input, o.as_str())).collect();
    let mut scores = Vec::with_capacity(options.len());
    for (r, opt) in scorer.score_batch(&pairs).into_iter().zip(options) {
        let s = r?;
        if !s.is_finite() {
            return Err(ScorerError::NonFinite);
        }
        scores.push(if per_token { s / words_lower(opt).len().max(1) as f64 } else { s });
    }
    Ok(argmax_first(&scores).expect("non-empty options"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Accuracy,
    RougeL,
}

impl Metric {
    pub fn for_cluster(c: Cluster) -> Metric {
        if c.is_classification() {
            Metric::Accuracy
        } else {
            Metric::RougeL
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Per-token mean log-likelihood instead of the raw sum.
    pub per_token: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstructionResult {
    pub instruction_id: String,
    /// Accuracy or mean Rouge-L; absent when no item was scored.
    pub value: Option<f64>,
    pub items: usize,
    pub errored: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: String,
    pub metric: Metric,
    pub per_token: bool,
    pub instructions: Vec<InstructionResult>,
    /// Aggregates over instructions with a value.
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub errored_items: usize,
    /// Instructions left out of the aggregates because no item was scored.
    pub excluded_instructions: Vec<String>,
}

/// Mean of the values; `None` when empty.
pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Median; the average of the two middle values for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

enum Outcome {
    Value(f64),
    Errored,
}

fn score_example(scorer: &dyn ScorerBackend, ex: &TextToTextExample, metric: Metric, opts: EvalOptions) -> Outcome {
    match metric {
        Metric::Accuracy => {
            let Some(choices) = ex.answer_choices.as_ref() else { return Outcome::Errored };
            let Some(gold) = choices.iter().position(|c| *c == ex.target) else { return Outcome::Errored };
            match rank_classify(scorer, &ex.input, choices, opts.per_token) {
                Ok(i) => Outcome::Value(if i == gold { 1.0 } else { 0.0 }),
                Err(e) => {
                    log::debug!("{}: {e}", ex.id);
                    Outcome::Errored
                }
            }
        }
        Metric::RougeL => match scorer.generate(&ex.input) {
            Ok(pred) => Outcome::Value(rouge_l(&pred, &ex.target)),
            Err(e) => {
                log::debug!("{}: {e}", ex.id);
                Outcome::Errored
            }
        },
    }
}

/// Scores rendered examples, grouped by instruction.
pub fn evaluate_examples(
    scorer: &dyn ScorerBackend,
    task: &str,
    metric: Metric,
    examples: &[TextToTextExample],
    opts: EvalOptions,
) -> EvalReport {
    let outcomes: Vec<Outcome> = examples.par_iter().map(|ex| score_example(scorer, ex, metric, opts)).collect();
    let mut groups: BTreeMap<&str, (usize, usize, f64)> = BTreeMap::new();
    for (ex, outcome) in examples.iter().zip(&outcomes) {
        let g = groups.entry(&ex.meta.instruction_id).or_default();
        g.0 += 1;
        match outcome {
            Outcome::Value(v) => g.2 += v,
            Outcome::Errored => g.1 += 1,
        }
    }
    let instructions: Vec<InstructionResult> = groups
        .into_iter()
        .map(|(id, (items, errored, sum))| {
            let scored = items - errored;
            InstructionResult {
                instruction_id: id.to_string(),
                value: (scored > 0).then(|| sum / scored as f64),
                items,
                errored,
            }
        })
        .collect();
    let values: Vec<f64> = instructions.iter().filter_map(|r| r.value).collect();
    EvalReport {
        task: task.to_string(),
        metric,
        per_token: opts.per_token,
        mean: mean(&values),
        median: median(&values),
        min: values.iter().cloned().reduce(f64::min),
        max: values.iter().cloned().reduce(f64::max),
        errored_items: instructions.iter().map(|r| r.errored).sum(),
        excluded_instructions: instructions.iter().filter(|r| r.value.is_none()).map(|r| r.instruction_id.clone()).collect(),
        instructions,
    }
}

/// Renders `records` of one task through every applicable template, then
/// scores them.
pub fn evaluate(
    scorer: &dyn ScorerBackend,
    task: &str,
    templates: &[InstructionTemplate],
    records: &[LabeledRecord],
    opts: EvalOptions,
) -> Result<EvalReport, TemplateError> {
    let records: Vec<&LabeledRecord> = records.iter().filter(|r| r.task == task).collect();
    let Some(cluster) = records.first().map(|r| r.sample.cluster()) else {
        return Ok(evaluate_examples(scorer, task, Metric::Accuracy, &[], opts));
    };
    let mut labels: Vec<String> = records
        .iter()
        .filter_map(|r| match &r.sample {
            crate::constructors::ClusterSample::Tc(t) => Some(t.label.clone()),
            _ => None,
        })
        .collect();
    labels.sort();
    labels.dedup();
    let mut examples = Vec::new();
    for t in templates.iter().filter(|t| t.cluster == cluster && t.applies_to(task, Origin::Labeled)) {
        for r in &records {
            let id = format!("{task}/{}", r.id);
            let ctx = RenderContext::new(&id, task, Origin::Labeled).with_labels(&labels);
            examples.push(render(t, &r.sample, &ctx)?);
        }
    }
    Ok(evaluate_examples(scorer, task, Metric::for_cluster(cluster), &examples, opts))
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
}

impl EvalReport {
    /// Aligned plain-text table, one row per instruction plus aggregates.
    pub fn to_table(&self) -> String {
        let width = self.instructions.iter().map(|r| r.instruction_id.len()).max().unwrap_or(0).max(11);
        let mut out = String::new();
        let metric = match self.metric {
            Metric::Accuracy => "accuracy",
            Metric::RougeL => "rouge_l",
        };
        let _ = writeln!(out, "task: {}  metric: {metric}", self.task);
        let _ = writeln!(out, "{:<width$}  {:>8}  {:>6}  {:>7}", "instruction", "value", "items", "errored");
        for r in &self.instructions {
            let _ = writeln!(out, "{:<width$}  {:>8}  {:>6}  {:>7}", r.instruction_id, fmt_value(r.value), r.items, r.errored);
        }
        for (name, v) in [("mean", self.mean), ("median", self.median), ("min", self.min), ("max", self.max)] {
            let _ = writeln!(out, "{:<width$}  {:>8}", name, fmt_value(v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::templating::ExampleMeta;
    use proptest::prelude::*;

    struct Fixed(Vec<f64>);
    impl ScorerBackend for Fixed {
        fn score(&self, _: &str, target: &str) -> Result<f64, ScorerError> {
            let i: usize = target.parse().unwrap();
            Ok(self.0[i])
        }
    }

    struct Broken;
    impl ScorerBackend for Broken {
        fn score(&self, _: &str, _: &str) -> Result<f64, ScorerError> {
            Err(ScorerError::Backend { attempts: 3, message: "down".into() })
        }
    }

    fn opts(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn argmax_and_ties() {
        assert_eq!(rank_classify(&Fixed(vec![-1.0, -5.0]), "", &opts(2), false).unwrap(), 0);
        assert_eq!(rank_classify(&Fixed(vec![-2.0, -2.0, -2.0]), "", &opts(3), false).unwrap(), 0);
        assert_eq!(rank_classify(&Fixed(vec![-3.0, -1.0, -2.0]), "", &opts(3), false).unwrap(), 1);
        assert_eq!(rank_classify(&Fixed(vec![-6.0, -2.0, -4.0]), "", &opts(3), false).unwrap(), 1);
        assert!(rank_classify(&Fixed(vec![0.0]), "", &opts(1), false).is_err());
        assert!(rank_classify(&Fixed(vec![0.0, 0.0]), "", &["a".into(), "a".into()], false).is_err());
    }

    struct Summed;
    impl ScorerBackend for Summed {
        fn score(&self, _: &str, target: &str) -> Result<f64, ScorerError> {
            Ok(if target == "a" { -2.0 } else { -3.0 })
        }
    }

    #[test]
    fn per_token_normalization() {
        let options = vec!["a".to_string(), "b c d".to_string()];
        assert_eq!(rank_classify(&Summed, "", &options, false).unwrap(), 0);
        assert_eq!(rank_classify(&Summed, "", &options, true).unwrap(), 1);
    }

    #[test]
    fn aggregates() {
        assert_eq!(mean(&[0.6, 0.8]), Some(0.7));
        assert_eq!(median(&[0.6, 0.8]), Some(0.7));
        let m = mean(&[0.5, 0.9, 0.6]).unwrap();
        assert!((m - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(median(&[0.5, 0.9, 0.6]), Some(0.6));
        assert_eq!(mean(&[]), None);
    }

    fn example(id: usize, instruction: &str, gold: usize) -> TextToTextExample {
        TextToTextExample {
            id: format!("{id}#{instruction}"),
            input: "x".into(),
            target: gold.to_string(),
            answer_choices: Some(opts(3)),
            meta: ExampleMeta {
                cluster: Cluster::Mcqa,
                task: "t".into(),
                instruction_id: instruction.into(),
                origin: Origin::Labeled,
                doc_id: None,
                domain: None,
            },
        }
    }

    #[test]
    fn gold_first_accuracy_and_errors() {
        let tied = Fixed(vec![0.0, 0.0, 0.0]);
        let xs: Vec<_> = (0..10).map(|i| example(i, "a", if i < 3 { 0 } else { 2 })).collect();
        let r = evaluate_examples(&tied, "t", Metric::Accuracy, &xs, EvalOptions::default());
        assert_eq!(r.mean, Some(0.3));
        let r = evaluate_examples(&Broken, "t", Metric::Accuracy, &xs, EvalOptions::default());
        assert_eq!(r.errored_items, 10);
        assert_eq!(r.excluded_instructions, ["a"]);
        assert_eq!(r.mean, None);
        assert!(r.to_table().contains("mean"));
    }

    proptest! {
        #[test]
        fn monotone_invariance(scores in proptest::collection::vec(-50.0f64..0.0, 2..8), a in 0.1f64..5.0, b in -10.0f64..10.0) {
            let base = argmax_first(&scores).unwrap();
            let affine: Vec<f64> = scores.iter().map(|s| a * s + b).collect();
            let exp: Vec<f64> = scores.iter().map(|s| s.exp()).collect();
            prop_assert_eq!(argmax_first(&affine).unwrap(), base);
            prop_assert_eq!(argmax_first(&exp).unwrap(), base);
        }
    }
}
