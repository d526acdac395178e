//! Worker similarity from profiles and experience.
//!
//! Profiles are compared by Jaccard similarity of their feature tokens.
//! Experience (the text of a worker's past task records) is summarized as a
//! topic distribution under a multinomial mixture fitted by EM, and two
//! workers are compared through the KL divergence of their distributions.

mod topic;

use std::collections::BTreeSet;

pub use topic::{
    em_fit, em_fit_observed, experience_similarity_matrix, kl_distance, topic_posterior, EmStep, Experience, TopicModel,
};

/// Default value of [`relevance`] for a worker whose features coincide with the task's.
pub const RELEVANCE_SENTINEL: f64 = 1e12;

/// Splits free text into feature tokens.
///
/// Implement this to plug in stemming or a domain vocabulary.
pub trait Tokenizer {
    fn tokenize(&self, text: &str) -> Vec<String>;
}

/// Lowercases and splits on anything that is not alphanumeric.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimpleTokenizer;

impl Tokenizer for SimpleTokenizer {
    fn tokenize(&self, text: &str) -> Vec<String> {
        text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_lowercase).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkerProfile {
    pub id: String,
    pub features: BTreeSet<String>,
}

impl WorkerProfile {
    pub fn new(id: impl Into<String>, features: impl IntoIterator<Item = impl Into<String>>) -> Self {
        WorkerProfile {
            id: id.into(),
            features: features.into_iter().map(Into::into).filter(|t: &String| !t.is_empty()).collect(),
        }
    }

    pub fn from_text(id: impl Into<String>, text: &str, tokenizer: &impl Tokenizer) -> Self {
        Self::new(id, tokenizer.tokenize(text))
    }
}

/// One worker's record on one task.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskRecord {
    pub task_id: String,
    pub worker_id: String,
    pub features: BTreeSet<String>,
}

/// `|A ∩ B| / |A ∪ B|`; two empty sets have similarity 0.
pub fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

pub fn jaccard_similarity(a: &WorkerProfile, b: &WorkerProfile) -> f64 {
    jaccard(&a.features, &b.features)
}

/// Jaccard distance between a worker and a task.
pub fn relevance_distance(worker: &WorkerProfile, task: &BTreeSet<String>) -> f64 {
    1.0 - jaccard(&worker.features, task)
}

/// Inverse Jaccard distance, [`RELEVANCE_SENTINEL`] when the distance is zero.
pub fn relevance(worker: &WorkerProfile, task: &BTreeSet<String>) -> f64 {
    relevance_with_sentinel(worker, task, RELEVANCE_SENTINEL)
}

pub fn relevance_with_sentinel(worker: &WorkerProfile, task: &BTreeSet<String>, sentinel: f64) -> f64 {
    let d = relevance_distance(worker, task);
    if d <= 0.0 {
        sentinel
    } else {
        1.0 / d
    }
}

/// Workers within Jaccard distance `radius` of the task, in input order.
pub fn relevant_workers<'a>(task: &BTreeSet<String>, pool: &'a [WorkerProfile], radius: f64) -> Vec<&'a WorkerProfile> {
    pool.iter().filter(|w| relevance_distance(w, task) <= radius).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn wp(id: &str, items: &[&str]) -> WorkerProfile {
        WorkerProfile::new(id, items.iter().copied())
    }

    #[test]
    fn jaccard_examples() {
        let a = wp("a", &["x", "y"]);
        assert_eq!(jaccard_similarity(&a, &a), 1.0);
        assert_eq!(jaccard_similarity(&a, &wp("b", &["z"])), 0.0);
        assert_eq!(jaccard_similarity(&wp("a", &["a", "b", "c"]), &wp("b", &["b", "c", "d"])), 0.5);
        assert_eq!(jaccard_similarity(&wp("a", &[]), &wp("b", &[])), 0.0);
    }

    #[test]
    fn relevance_examples() {
        let w = wp("w", &["a", "b", "c"]);
        assert!((relevance(&w, &set(&["b", "c", "d"])) - 2.0).abs() < 1e-12);
        assert_eq!(relevance(&w, &set(&["q"])), 1.0);
        assert_eq!(relevance(&w, &set(&["a", "b", "c"])), RELEVANCE_SENTINEL);
        assert_eq!(relevance_with_sentinel(&w, &set(&["a", "b", "c"]), 7.0), 7.0);
    }

    #[test]
    fn relevant_worker_radius() {
        let task = set(&["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"]);
        let pool = vec![
            wp("close", &["a", "b", "c", "d", "e", "f", "g", "h"]),
            wp("mid", &["a", "b", "c", "d", "e"]),
            wp("far", &["a"]),
            wp("same", &["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"]),
        ];
        let d: Vec<f64> = pool.iter().map(|w| relevance_distance(w, &task)).collect();
        assert!((d[0] - 0.2).abs() < 1e-12 && (d[1] - 0.5).abs() < 1e-12 && (d[2] - 0.9).abs() < 1e-12);

        let ids = |r: Vec<&WorkerProfile>| r.into_iter().map(|w| w.id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(relevant_workers(&task, &pool[..3], 0.5)), vec!["close", "mid"]);
        assert_eq!(relevant_workers(&task, &pool, 1.0).len(), 4);
        assert_eq!(ids(relevant_workers(&task, &pool, 0.0)), vec!["same"]);
    }

    #[test]
    fn tokenizer_splits_and_lowercases() {
        let t = SimpleTokenizer.tokenize("Great pizza, GREAT service!  10/10");
        assert_eq!(t, vec!["great", "pizza", "great", "service", "10", "10"]);
        let p = WorkerProfile::from_text("w", "Rust, rust; Go", &SimpleTokenizer);
        assert_eq!(p.features, set(&["go", "rust"]));
    }
}
