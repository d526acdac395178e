//! Poisson and Binomial selectors.
//!
//! Both surrogates are unimodal in the subset's probability mass, so the best
//! subset sits on one of the two sides of the peak. Each side is an exact
//! k-item knapsack: the heaviest size-k subset not exceeding the peak, and the
//! complement of the heaviest size-(|N| - k) subset not exceeding
//! `sum(p) - peak`.

use std::time::Instant;

use super::{check_window, CandidatePool, Method, SelectionResult};
use crate::pbd::{self, DemandWindow};
use crate::{Error, Result};

/// Capacity slack absorbing rounding in repeated subtraction.
const CAPACITY_SLACK: f64 = 1e-12;

/// Knapsack capacity, the value of `sum(p)` the surrogate peaks at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnapsackTarget {
    omega: f64,
}

impl KnapsackTarget {
    pub fn new(omega: f64) -> Result<Self> {
        if omega.is_nan() || omega < 0.0 {
            return Err(Error::param(format!("knapsack capacity must be non-negative, got {omega}")));
        }
        Ok(KnapsackTarget { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// Heaviest size-`k` subset with total probability at most `target`.
///
/// Returns pool indices (ascending), or `None` when even the `k` lightest
/// workers exceed the capacity.
pub fn backtrack_knapsack(k: usize, target: KnapsackTarget, pool: &CandidatePool) -> Result<Option<Vec<usize>>> {
    if k > pool.len() {
        return Err(Error::InvalidK { k, n: pool.len(), reason: "need k <= |N|" });
    }
    Ok(Backtrack::new(pool).solve(k, target.omega))
}

struct Backtrack {
    /// Pool indices sorted by ascending probability.
    order: Vec<usize>,
    values: Vec<f64>,
    /// prefix[i] = sum of the i lightest values.
    prefix: Vec<f64>,
}

impl Backtrack {
    fn new(pool: &CandidatePool) -> Self {
        let mut order: Vec<usize> = (0..pool.len()).collect();
        order.sort_by(|&a, &b| pool.workers[a].p.total_cmp(&pool.workers[b].p).then(a.cmp(&b)));
        let values: Vec<f64> = order.iter().map(|&i| pool.workers[i].p).collect();
        let mut prefix = Vec::with_capacity(values.len() + 1);
        prefix.push(0.0);
        for v in &values {
            prefix.push(prefix.last().unwrap() + v);
        }
        Backtrack { order, values, prefix }
    }

    /// Solves over the full pool with an arbitrary (possibly negative) capacity.
    fn solve(&self, k: usize, capacity: f64) -> Option<Vec<usize>> {
        let (_, mut picked) = self.bt(self.values.len(), k, capacity)?;
        let mut out: Vec<usize> = picked.drain(..).map(|i| self.order[i]).collect();
        out.sort_unstable();
        Some(out)
    }

    /// Best subset of size `k` among the first `m` sorted items.
    fn bt(&self, m: usize, k: usize, capacity: f64) -> Option<(f64, Vec<usize>)> {
        let fits = |load: f64| load <= capacity + CAPACITY_SLACK;
        if m == k {
            let load = self.prefix[m];
            return fits(load).then(|| (load, (0..m).collect()));
        }
        // The k lightest items already overflow.
        if !fits(self.prefix[k]) {
            return None;
        }
        // The k heaviest items fit, so nothing can beat them.
        let top = self.prefix[m] - self.prefix[m - k];
        if fits(top) {
            return Some((top, (m - k..m).collect()));
        }
        let last = self.values[m - 1];
        let without = self.bt(m - 1, k, capacity);
        let with = if k > 0 {
            self.bt(m - 1, k - 1, capacity - last).map(|(load, mut items)| {
                items.push(m - 1);
                (load + last, items)
            })
        } else {
            None
        };
        match (without, with) {
            (Some(a), Some(b)) => Some(if a.0 > b.0 { a } else { b }),
            (a, b) => a.or(b),
        }
    }
}

/// Picks the better of the two knapsack sides under `score`.
fn two_sided(pool: &CandidatePool, k: usize, omega: f64, score: impl Fn(f64) -> f64) -> Result<(Vec<usize>, f64)> {
    let solver = Backtrack::new(pool);
    let n = pool.len();
    let total: f64 = pool.workers.iter().map(|w| w.p).sum();
    let left = solver.solve(k, omega);
    let right = if total - omega >= -CAPACITY_SLACK {
        solver.solve(n - k, total - omega).map(|outside| {
            let mut inside = vec![true; n];
            for i in outside {
                inside[i] = false;
            }
            (0..n).filter(|&i| inside[i]).collect::<Vec<_>>()
        })
    } else {
        None
    };
    let mass = |s: &[usize]| s.iter().map(|&i| pool.workers[i].p).sum::<f64>();
    let scored = |s: Vec<usize>| {
        let g = score(mass(&s));
        (s, g)
    };
    match (left.map(scored), right.map(scored)) {
        (Some(l), Some(r)) => Ok(if l.1 > r.1 { l } else { r }),
        (Some(s), None) | (None, Some(s)) => Ok(s),
        (None, None) => unreachable!("one side of the knapsack split is always feasible when k <= |N|"),
    }
}

/// Selection under the Poisson surrogate.
///
/// For a degenerate window (`theta1 == theta2`) the target is `theta1`, the
/// mode of the approximating Poisson law, and sides are compared by the
/// Poisson mass at `theta1`.
pub fn select_poisson(pool: &CandidatePool, w: &DemandWindow) -> Result<SelectionResult> {
    let started = Instant::now();
    check_window(pool, w)?;
    let (omega, score): (f64, Box<dyn Fn(f64) -> f64>) = if w.is_degenerate() {
        let t = w.theta1();
        (t as f64, Box::new(move |lambda| pbd::poisson_pmf(t, lambda)))
    } else {
        let window = *w;
        (pbd::peak_poisson(w)?, Box::new(move |lambda| pbd::g_poisson(lambda, &window).unwrap_or(0.0)))
    };
    let (subset, objective) = two_sided(pool, w.k(), omega, score)?;
    Ok(SelectionResult::build(pool, w, subset, objective, Method::Poisson, started))
}

/// Selection under the Binomial surrogate with `n = k` and `p = sum(p) / k`.
///
/// Degenerate windows target `k * theta1 / k = theta1` and compare sides by
/// the Binomial mass at `theta1`.
pub fn select_binomial(pool: &CandidatePool, w: &DemandWindow) -> Result<SelectionResult> {
    let started = Instant::now();
    check_window(pool, w)?;
    let k = w.k();
    let clamp = |lambda: f64| (lambda / k as f64).clamp(0.0, 1.0);
    let (omega, score): (f64, Box<dyn Fn(f64) -> f64>) = if w.is_degenerate() {
        let t = w.theta1();
        (t as f64, Box::new(move |lambda| pbd::binomial_pmf(t, k, clamp(lambda))))
    } else {
        let window = *w;
        let (_, omega) = pbd::peak_binomial(k, w)?;
        (omega, Box::new(move |lambda| pbd::g_binomial(clamp(lambda), k, &window).unwrap_or(0.0)))
    };
    let (subset, objective) = two_sided(pool, k, omega, score)?;
    Ok(SelectionResult::build(pool, w, subset, objective, Method::Binomial, started))
}
