use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::Tokenizer;
use crate::smodel::SimilarityMatrix;
use crate::{Error, Result};

/// Additive smoothing applied to word probabilities and to KL arguments.
pub const SMOOTHING: f64 = 1e-10;

/// Slack allowed on the normalization of distributions passed to [`kl_distance`].
const NORMALIZATION_SLACK: f64 = 1e-6;

/// Bag of words drawn from one worker's task records.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Experience {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl Experience {
    pub fn from_tokens<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Self {
        let mut e = Experience::default();
        e.extend(tokens);
        e
    }

    pub fn from_text(text: &str, tokenizer: &impl Tokenizer) -> Self {
        Self::from_tokens(tokenizer.tokenize(text))
    }

    pub fn extend<S: Into<String>>(&mut self, tokens: impl IntoIterator<Item = S>) {
        for t in tokens {
            *self.counts.entry(t.into()).or_insert(0) += 1;
            self.total += 1;
        }
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

/// Multinomial mixture over a fixed vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    /// Topic priors.
    pub pi: Vec<f64>,
    /// Per-topic word probabilities, one row per topic, columns follow `vocab`.
    pub mu: Vec<Vec<f64>>,
    pub vocab: Vec<String>,
    #[serde(default)]
    pub log_likelihood_trace: Vec<f64>,
}

impl TopicModel {
    pub fn topics(&self) -> usize {
        self.pi.len()
    }

    /// Checks shapes and normalization after deserialization.
    pub fn validate(&self) -> Result<()> {
        let k = self.pi.len();
        if k == 0 {
            return Err(Error::param("topic model has no topics"));
        }
        if self.mu.len() != k || self.mu.iter().any(|row| row.len() != self.vocab.len()) {
            return Err(Error::param("topic model shapes do not match its vocabulary"));
        }
        let normalized = |v: &[f64]| v.iter().all(|x| *x >= 0.0) && (v.iter().sum::<f64>() - 1.0).abs() <= 1e-6;
        if !normalized(&self.pi) || !self.mu.iter().all(|r| normalized(r)) {
            return Err(Error::param("topic model parameters are not normalized"));
        }
        Ok(())
    }
}

/// Parameters after one E-step, handed to the observer of [`em_fit_observed`].
#[derive(Debug)]
pub struct EmStep<'a> {
    pub iteration: usize,
    pub pi: &'a [f64],
    pub mu: &'a [Vec<f64>],
    pub log_likelihood: f64,
}

/// Fits a `topics`-component multinomial mixture by EM.
pub fn em_fit(collections: &[Experience], topics: usize, tol: f64, max_iter: usize, seed: u64) -> Result<TopicModel> {
    em_fit_observed(collections, topics, tol, max_iter, seed, |_| {})
}

/// [`em_fit`] with a callback invoked once per iteration, before the M-step.
pub fn em_fit_observed(
    collections: &[Experience],
    topics: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
    mut observer: impl FnMut(&EmStep<'_>),
) -> Result<TopicModel> {
    if topics == 0 {
        return Err(Error::param("number of topics must be at least 1"));
    }
    if collections.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    if let Some(i) = collections.iter().position(Experience::is_empty) {
        return Err(Error::param(format!("collection {i} has no words")));
    }

    let vocab: Vec<String> =
        collections.iter().flat_map(|e| e.counts.keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
    let index: BTreeMap<&str, usize> = vocab.iter().enumerate().map(|(j, w)| (w.as_str(), j)).collect();
    let docs: Vec<Vec<(usize, f64)>> =
        collections.iter().map(|e| e.counts.iter().map(|(w, &c)| (index[w.as_str()], c as f64)).collect()).collect();
    let m = vocab.len();

    let mut rng = crate::seed::rng(seed);
    let mut pi = vec![1.0 / topics as f64; topics];
    let mut mu: Vec<Vec<f64>> = (0..topics)
        .map(|_| {
            let mut row: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= s);
            smooth(&mut row);
            row
        })
        .collect();

    let mut resp = vec![vec![0.0; topics]; docs.len()];
    let mut trace = Vec::new();
    let mut previous: Option<f64> = None;
    for iteration in 0.. {
        let log_mu: Vec<Vec<f64>> = mu.iter().map(|row| row.iter().map(|x| x.ln()).collect()).collect();
        let mut ll = 0.0;
        for (doc, h) in docs.iter().zip(resp.iter_mut()) {
            for (t, ht) in h.iter_mut().enumerate() {
                *ht = pi[t].ln() + doc.iter().map(|&(j, c)| c * log_mu[t][j]).sum::<f64>();
            }
            ll += normalize_log(h);
        }
        trace.push(ll);
        observer(&EmStep { iteration, pi: &pi, mu: &mu, log_likelihood: ll });

        let converged = previous.is_some_and(|p| (ll - p).abs() < tol);
        if converged || iteration >= max_iter {
            break;
        }
        previous = Some(ll);

        // M-step.
        for (t, p) in pi.iter_mut().enumerate() {
            *p = resp.iter().map(|h| h[t]).sum::<f64>() / docs.len() as f64;
        }
        for (t, row) in mu.iter_mut().enumerate() {
            let mut next = vec![0.0; m];
            for (doc, h) in docs.iter().zip(&resp) {
                for &(j, c) in doc {
                    next[j] += h[t] * c;
                }
            }
            let s: f64 = next.iter().sum();
            if s > 0.0 {
                next.iter_mut().for_each(|x| *x /= s);
                smooth(&mut next);
                *row = next;
            }
        }
    }

    Ok(TopicModel { pi, mu, vocab, log_likelihood_trace: trace })
}

fn smooth(v: &mut [f64]) {
    let s: f64 = v.iter().map(|x| x + SMOOTHING).sum();
    v.iter_mut().for_each(|x| *x = (*x + SMOOTHING) / s);
}

/// Turns log-weights into probabilities in place and returns their log-sum.
fn normalize_log(v: &mut [f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = v.iter().map(|x| (x - max).exp()).sum();
    v.iter_mut().for_each(|x| *x = (*x - max).exp() / s);
    max + s.ln()
}

/// Posterior topic distribution of one collection. Words outside the
/// model's vocabulary are ignored.
pub fn topic_posterior(e: &Experience, model: &TopicModel) -> Vec<f64> {
    let index: BTreeMap<&str, usize> = model.vocab.iter().enumerate().map(|(j, w)| (w.as_str(), j)).collect();
    let mut h: Vec<f64> = model
        .pi
        .iter()
        .zip(&model.mu)
        .map(|(p, row)| {
            p.ln()
                + e.counts
                    .iter()
                    .filter_map(|(w, &c)| index.get(w.as_str()).map(|&j| c as f64 * row[j].ln()))
                    .sum::<f64>()
        })
        .collect();
    normalize_log(&mut h);
    h
}

/// `D(a || b) = sum a_i ln(a_i / b_i)` in nats, after smoothing both arguments.
pub fn kl_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::param(format!("distributions have lengths {} and {}", a.len(), b.len())));
    }
    for v in [a, b] {
        let s: f64 = v.iter().sum();
        if v.iter().any(|x| x.is_nan() || *x < 0.0) || (s - 1.0).abs() > NORMALIZATION_SLACK {
            return Err(Error::param(format!("not a probability distribution (sums to {s})")));
        }
    }
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    smooth(&mut a);
    smooth(&mut b);
    Ok(a.iter().zip(&b).map(|(x, y)| x * (x / y).ln()).sum::<f64>().max(0.0))
}

/// Pairwise similarity `-(D(i || j) + D(j || i)) / 2` of the workers' topic posteriors.
pub fn experience_similarity_matrix(workers: &[Experience], model: &TopicModel) -> Result<SimilarityMatrix> {
    if workers.len() < 2 {
        return Err(Error::param("need at least two workers"));
    }
    let posteriors: Vec<Vec<f64>> = workers.iter().map(|e| topic_posterior(e, model)).collect();
    let mut failure = None;
    let m = SimilarityMatrix::from_fn(workers.len(), |i, j| {
        let d = kl_distance(&posteriors[i], &posteriors[j])
            .and_then(|ij| Ok(ij + kl_distance(&posteriors[j], &posteriors[i])?));
        match d {
            Ok(d) => -d / 2.0,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(m),
    }
}
