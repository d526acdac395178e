//! Similarity-driven crowd selection.
//!
//! The diversity of a crowd is the negated sum of its unordered pairwise
//! similarities divided by the crowd size. For a fixed size the divisor is
//! constant, so both selectors optimize [`sum_objective`].

use std::time::Instant;

use rand::Rng;

use crate::{Error, Result};

/// Largest number of subsets [`exact_select`] is willing to enumerate.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Symmetric pairwise similarity scores. The diagonal is never read.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    sim: Vec<f64>,
    ids: Vec<String>,
}

impl SimilarityMatrix {
    /// Builds a matrix from row-major entries; ids default to `0..n`.
    pub fn new(n: usize, sim: Vec<f64>) -> Result<Self> {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::with_ids(ids, sim)
    }

    pub fn with_ids(ids: Vec<String>, sim: Vec<f64>) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::Empty("similarity matrix"));
        }
        if sim.len() != n * n {
            return Err(Error::param(format!("expected {} entries for a {n}x{n} matrix, got {}", n * n, sim.len())));
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (sim[i * n + j], sim[j * n + i]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::param(format!("non-finite similarity at ({i}, {j})")));
                }
                if (a - b).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::param(format!("matrix is not symmetric at ({i}, {j}): {a} vs {b}")));
                }
            }
        }
        Ok(SimilarityMatrix { n, sim, ids })
    }

    /// Builds a symmetric matrix from a pairwise function evaluated on `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut sim = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                sim[i * n + j] = v;
                sim[j * n + i] = v;
            }
        }
        Self::new(n, sim)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.sim[i * self.n + j]
    }

    /// Off-diagonal entries of the upper triangle.
    pub fn upper_triangle(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| self.get(i, j)))
    }
}

/// A set of distinct worker indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Crowd(Vec<usize>);

impl Crowd {
    /// Sorts the members and rejects duplicates.
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("crowd contains duplicate workers"));
        }
        Ok(Crowd(members))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check(&self, m: &SimilarityMatrix) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= m.n() => {
                Err(Error::param(format!("worker index {last} out of range for {} workers", m.n())))
            }
            _ => Ok(()),
        }
    }
}

fn pair_sum(members: &[usize], m: &SimilarityMatrix) -> f64 {
    let mut total = 0.0;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            total += m.get(i, j);
        }
    }
    total
}

/// Negated sum of unordered pairwise similarities.
pub fn sum_objective(c: &Crowd, m: &SimilarityMatrix) -> Result<f64> {
    c.check(m)?;
    Ok(-pair_sum(c.members(), m))
}

/// Negated average pairwise similarity: `sum_objective / |c|`.
pub fn diversity(c: &Crowd, m: &SimilarityMatrix) -> Result<f64> {
    if c.is_empty() {
        return Err(Error::Empty("crowd"));
    }
    Ok(sum_objective(c, m)? / c.len() as f64)
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial_count(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Best size-`k` crowd by full enumeration.
///
/// Ties go to the lexicographically smallest member list.
pub fn exact_select(m: &SimilarityMatrix, k: usize) -> Result<Crowd> {
    exact_select_until(m, k, None)
}

pub(crate) fn exact_select_until(m: &SimilarityMatrix, k: usize, deadline: Option<Instant>) -> Result<Crowd> {
    let n = m.n();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n, reason: "need 1 <= k <= n" });
    }
    let count = binomial_count(n, k);
    if count > ENUMERATION_LIMIT {
        return Err(Error::EnumerationGuard { n, k, limit: ENUMERATION_LIMIT });
    }

    let mut search =
        ExactSearch { m, k, stack: Vec::with_capacity(k), best: None, best_sum: f64::INFINITY, deadline, visited: 0 };
    search.descend(0, 0.0)?;
    Ok(Crowd(search.best.expect("at least one subset is enumerated")))
}

struct ExactSearch<'a> {
    m: &'a SimilarityMatrix,
    k: usize,
    stack: Vec<usize>,
    best: Option<Vec<usize>>,
    best_sum: f64,
    deadline: Option<Instant>,
    visited: u64,
}

impl ExactSearch<'_> {
    // Enumerates in lexicographic order, carrying the partial pair sum.
    fn descend(&mut self, start: usize, partial: f64) -> Result<()> {
        if self.stack.len() == self.k {
            self.visited += 1;
            if partial < self.best_sum {
                self.best_sum = partial;
                self.best = Some(self.stack.clone());
            }
            if self.visited.is_multiple_of(65_536) {
                if let Some(d) = self.deadline {
                    if Instant::now() > d {
                        return Err(Error::Timeout);
                    }
                }
            }
            return Ok(());
        }
        let remaining = self.k - self.stack.len();
        for w in start..=self.m.n() - remaining {
            let added: f64 = self.stack.iter().map(|&c| self.m.get(c, w)).sum();
            self.stack.push(w);
            let r = self.descend(w + 1, partial + added);
            self.stack.pop();
            r?;
        }
        Ok(())
    }
}

/// Greedy hill climbing.
///
/// Seeds the crowd with the least similar pair, then repeatedly adds the
/// worker that maximizes the diversity of the enlarged crowd. Ties go to the
/// smallest index.
pub fn greedy_select(m: &SimilarityMatrix, k: usize) -> Result<Crowd> {
    let n = m.n();
    if k < 2 || k > n {
        return Err(Error::InvalidK { k, n, reason: "greedy selection needs 2 <= k <= n" });
    }
    let (mut a, mut b) = (0, 1);
    for i in 0..n {
        for j in i + 1..n {
            if m.get(i, j) < m.get(a, b) {
                (a, b) = (i, j);
            }
        }
    }

    let mut chosen = vec![false; n];
    chosen[a] = true;
    chosen[b] = true;
    let mut members = vec![a, b];
    // load[w] = sum of similarities between w and the current crowd.
    let mut load: Vec<f64> = (0..n).map(|w| m.get(w, a) + m.get(w, b)).collect();

    while members.len() < k {
        let next = (0..n)
            .filter(|&w| !chosen[w])
            .fold(None::<usize>, |best, w| match best {
                Some(b) if load[b] <= load[w] => Some(b),
                _ => Some(w),
            })
            .expect("k <= n leaves a candidate");
        chosen[next] = true;
        members.push(next);
        for (w, l) in load.iter_mut().enumerate() {
            *l += m.get(w, next);
        }
    }
    Crowd::new(members)
}

/// Uniformly random size-`k` crowd.
pub fn random_select(m: &SimilarityMatrix, k: usize, seed: u64) -> Result<Crowd> {
    let n = m.n();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n, reason: "need 1 <= k <= n" });
    }
    let mut rng = crate::seed::rng(seed);
    Crowd::new(random_subset(&mut rng, n, k))
}

pub(crate) fn random_subset(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v = rand::seq::index::sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}
