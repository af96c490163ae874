use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ConstructorError, TcSample};
use crate::corpus::Document;

/// Number of topic labels kept.
pub const TOPIC_LABEL_COUNT: usize = 14;

/// URL path segments that never name a topic.
pub const URL_STOP_LIST: [&str; 9] = ["news", "en", "story", "us", "articles", "local", "english", "tag", "post"];

/// First path segment after the host made only of ASCII letters, shorter
/// than 20 characters and not stop-listed. Returned lowercased.
pub fn extract_topic_from_url(url: &str) -> Option<String> {
    let rest = match url.find("://") {
        Some(i) => &url[i + 3..],
        None => url,
    };
    let rest = rest.split(['?', '#']).next().unwrap_or("");
    rest.split('/').skip(1).find_map(|segment| {
        let ok = !segment.is_empty()
            && segment.len() < 20
            && segment.chars().all(|c| c.is_ascii_alphabetic())
            && !URL_STOP_LIST.contains(&segment.to_ascii_lowercase().as_str());
        ok.then(|| segment.to_ascii_lowercase())
    })
}

/// The frozen closed label set for TC.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicLabels {
    pub labels: Vec<String>,
    /// Set when fewer than [`TOPIC_LABEL_COUNT`] distinct topics were found.
    pub warning: bool,
}

impl TopicLabels {
    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }
}

/// The most frequent topics over `urls`, ties broken lexicographically.
pub fn collect_topic_labels<S: AsRef<str>>(urls: &[S]) -> Result<TopicLabels, ConstructorError> {
    if urls.is_empty() {
        return Err(ConstructorError::NoUrls);
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for url in urls {
        if let Some(topic) = extract_topic_from_url(url.as_ref()) {
            *counts.entry(topic).or_default() += 1;
        }
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let warning = ranked.len() < TOPIC_LABEL_COUNT;
    Ok(TopicLabels {
        labels: ranked.into_iter().take(TOPIC_LABEL_COUNT).map(|(l, _)| l).collect(),
        warning,
    })
}

/// A TC sample when the document URL yields a label in the closed set.
pub fn build_tc(doc: &Document, labels: &TopicLabels) -> Option<TcSample> {
    let topic = extract_topic_from_url(doc.url.as_deref()?)?;
    labels.contains(&topic).then(|| TcSample {
        text: doc.text.clone(),
        label: topic,
    })
}
