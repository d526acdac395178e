//! Task-driven crowd selection.
//!
//! Every solver returns a size-k subset of the candidate pool together with
//! its exact window probability `tau`, so results from different solvers are
//! directly comparable regardless of the surrogate each one optimizes.

mod anneal;
mod knapsack;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::pbd::{self, DemandWindow};
use crate::smodel::{binomial_count, random_subset};
use crate::{Error, Result};

pub use anneal::{sa_select, SaObjective, SaParams};
pub use knapsack::{backtrack_knapsack, select_binomial, select_poisson, KnapsackTarget};

/// Largest number of subsets [`exact_select`] is willing to enumerate.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Slack under which two window probabilities count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Worker {
    pub id: String,
    pub p: f64,
}

/// The candidate workers and their opinion probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePool {
    workers: Vec<Worker>,
}

impl CandidatePool {
    pub fn new(workers: Vec<Worker>) -> Result<Self> {
        if workers.is_empty() {
            return Err(Error::Empty("candidate pool"));
        }
        for (index, w) in workers.iter().enumerate() {
            if !(0.0..=1.0).contains(&w.p) {
                return Err(Error::ProbabilityOutOfRange { index, value: w.p });
            }
        }
        let mut ids: Vec<&str> = workers.iter().map(|w| w.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(dup) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::param(format!("duplicate worker id {:?}", dup[0])));
        }
        Ok(CandidatePool { workers })
    }

    /// Pool with ids `0..n` in input order.
    pub fn from_probs(probs: &[f64]) -> Result<Self> {
        Self::new(probs.iter().enumerate().map(|(i, &p)| Worker { id: i.to_string(), p }).collect())
    }

    pub fn workers(&self) -> &[Worker] {
        &self.workers
    }

    pub fn len(&self) -> usize {
        self.workers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.workers.is_empty()
    }

    pub fn probs(&self) -> Vec<f64> {
        self.workers.iter().map(|w| w.p).collect()
    }

    fn probs_of(&self, subset: &[usize]) -> Vec<f64> {
        subset.iter().map(|&i| self.workers[i].p).collect()
    }

    /// Indices ordered by worker id; the canonical order for tie-breaking.
    fn canonical_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| id_cmp(&self.workers[a].id, &self.workers[b].id));
        idx
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.len() {
            return Err(Error::InvalidK { k, n: self.len(), reason: "need 1 <= k <= |N|" });
        }
        Ok(())
    }
}

/// Numeric ids compare numerically, everything else lexicographically.
pub fn id_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "poisson")]
    Poisson,
    #[serde(rename = "binomial")]
    Binomial,
    #[serde(rename = "normal-sa")]
    NormalSa,
    #[serde(rename = "dftcf-sa")]
    DftcfSa,
    #[serde(rename = "random")]
    Random,
}

impl Method {
    pub const ALL: [Method; 6] =
        [Method::Exact, Method::Poisson, Method::Binomial, Method::NormalSa, Method::DftcfSa, Method::Random];

    pub fn tag(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Poisson => "poisson",
            Method::Binomial => "binomial",
            Method::NormalSa => "normal-sa",
            Method::DftcfSa => "dftcf-sa",
            Method::Random => "random",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::param(format!("unknown T-Model method {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    /// Pool indices of the selected workers, ascending.
    pub subset: Vec<usize>,
    /// Ids of the selected workers, in the order of `subset`.
    pub ids: Vec<String>,
    /// Exact window probability of the subset.
    pub tau: f64,
    /// The solver's own objective value for the subset.
    pub objective: f64,
    pub method: Method,
    pub wall_time: f64,
}

impl SelectionResult {
    fn build(
        pool: &CandidatePool,
        w: &DemandWindow,
        mut subset: Vec<usize>,
        objective: f64,
        method: Method,
        started: Instant,
    ) -> Self {
        subset.sort_unstable();
        // Evaluate in id order so tau does not depend on pool order.
        let mut by_id = subset.clone();
        by_id.sort_by(|&a, &b| id_cmp(&pool.workers[a].id, &pool.workers[b].id));
        let tau = pbd::tau_of(&pool.probs_of(&by_id), w);
        SelectionResult {
            ids: subset.iter().map(|&i| pool.workers[i].id.clone()).collect(),
            subset,
            tau,
            objective,
            method,
            wall_time: started.elapsed().as_secs_f64(),
        }
    }
}

fn check_window(pool: &CandidatePool, w: &DemandWindow) -> Result<()> {
    pool.check_k(w.k())
}

/// Maximizes the exact window probability over every size-k subset.
///
/// Ties (within 1e-12) go to the subset whose sorted id list is smallest.
pub fn exact_select(pool: &CandidatePool, w: &DemandWindow) -> Result<SelectionResult> {
    exact_select_until(pool, w, None)
}

pub(crate) fn exact_select_until(
    pool: &CandidatePool,
    w: &DemandWindow,
    deadline: Option<Instant>,
) -> Result<SelectionResult> {
    let started = Instant::now();
    check_window(pool, w)?;
    let (n, k) = (pool.len(), w.k());
    if binomial_count(n, k) > ENUMERATION_LIMIT {
        return Err(Error::EnumerationGuard { n, k, limit: ENUMERATION_LIMIT });
    }

    let order = pool.canonical_order();
    let sorted_probs: Vec<f64> = order.iter().map(|&i| pool.workers[i].p).collect();
    let mut comb: Vec<usize> = (0..k).collect();
    let mut buf = vec![0.0; k];
    let mut best = (f64::NEG_INFINITY, comb.clone());
    let mut visited: u64 = 0;
    loop {
        for (b, &c) in buf.iter_mut().zip(&comb) {
            *b = sorted_probs[c];
        }
        let tau = pbd::tau_of(&buf, w);
        if tau > best.0 + TIE_TOLERANCE {
            best = (tau, comb.clone());
        }
        visited += 1;
        if visited.is_multiple_of(16_384) {
            if let Some(d) = deadline {
                if Instant::now() > d {
                    return Err(Error::Timeout);
                }
            }
        }
        if !next_combination(&mut comb, n) {
            break;
        }
    }
    let subset = best.1.iter().map(|&c| order[c]).collect();
    Ok(SelectionResult::build(pool, w, subset, best.0, Method::Exact, started))
}

/// Advances `comb` to the next k-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let Some(i) = (0..k).rev().find(|&i| comb[i] < n - k + i) else {
        return false;
    };
    comb[i] += 1;
    for j in i + 1..k {
        comb[j] = comb[j - 1] + 1;
    }
    true
}

/// Uniformly random size-k subset.
pub fn random_select(pool: &CandidatePool, w: &DemandWindow, seed: u64) -> Result<SelectionResult> {
    let started = Instant::now();
    check_window(pool, w)?;
    let mut rng = crate::seed::rng(seed);
    let subset = random_subset(&mut rng, pool.len(), w.k());
    let tau = pbd::tau_of(&pool.probs_of(&subset), w);
    Ok(SelectionResult::build(pool, w, subset, tau, Method::Random, started))
}
