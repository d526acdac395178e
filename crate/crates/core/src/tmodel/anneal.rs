//! Simulated annealing over size-k subsets.
//!
//! A move swaps `k1` random members with `k1` random outsiders, where `k1` is
//! drawn uniformly from `1..=floor(min(k/2, (|N| - k)/2))`. Improvements (and
//! ties) are always accepted; a loss of `d` is accepted with probability
//! `exp(-d / T)`. The temperature cools geometrically from `t_ini` until it
//! drops to `t_end`, with `r` moves per temperature.

use std::str::FromStr;
use std::time::Instant;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_window, CandidatePool, Method, SelectionResult};
use crate::pbd::{self, ApproximationStats, DemandWindow};
use crate::smodel::random_subset;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaParams {
    pub t_ini: f64,
    pub t_end: f64,
    /// Moves per temperature level.
    pub r: u32,
    /// Cooling ratio.
    pub c: f64,
    pub seed: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams { t_ini: 1.0, t_end: 0.0001, r: 1000, c: 0.9, seed: 0 }
    }
}

impl SaParams {
    pub fn with_seed(seed: u64) -> Self {
        SaParams { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0 && self.t_ini > self.t_end && self.t_ini.is_finite()) {
            return Err(Error::param(format!(
                "annealing needs t_ini > t_end > 0, got t_ini = {}, t_end = {}",
                self.t_ini, self.t_end
            )));
        }
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(Error::param(format!("cooling ratio must lie in (0, 1), got {}", self.c)));
        }
        Ok(())
    }

    /// Number of temperature levels visited.
    pub fn levels(&self) -> usize {
        let mut t = self.t_ini;
        let mut n = 0;
        while t > self.t_end {
            t *= self.c;
            n += 1;
        }
        n
    }
}

/// What the annealer maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SaObjective {
    /// Continuity-corrected Normal surrogate.
    #[serde(rename = "normal")]
    Normal,
    /// Exact window probability via the characteristic-function DFT.
    #[serde(rename = "dftcf")]
    Dftcf,
}

impl FromStr for SaObjective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(SaObjective::Normal),
            "dftcf" => Ok(SaObjective::Dftcf),
            _ => Err(Error::param(format!("unknown annealing objective {s:?}"))),
        }
    }
}

impl SaObjective {
    fn method(self) -> Method {
        match self {
            SaObjective::Normal => Method::NormalSa,
            SaObjective::Dftcf => Method::DftcfSa,
        }
    }

    fn eval(self, probs: &[f64], w: &DemandWindow) -> f64 {
        match self {
            SaObjective::Normal => pbd::g_normal(&ApproximationStats::from_probs(probs), w),
            SaObjective::Dftcf => pbd::tau_of(probs, w),
        }
    }
}

pub fn sa_select(
    pool: &CandidatePool,
    w: &DemandWindow,
    objective: SaObjective,
    params: &SaParams,
) -> Result<SelectionResult> {
    let started = Instant::now();
    check_window(pool, w)?;
    params.validate()?;
    let (n, k) = (pool.len(), w.k());
    let probs = pool.probs();
    let gather = |s: &[usize], buf: &mut Vec<f64>| {
        buf.clear();
        buf.extend(s.iter().map(|&i| probs[i]));
    };
    let mut buf = Vec::with_capacity(k);

    if n == k {
        let all: Vec<usize> = (0..n).collect();
        gather(&all, &mut buf);
        let g = objective.eval(&buf, w);
        return Ok(SelectionResult::build(pool, w, all, g, objective.method(), started));
    }

    let mut rng = crate::seed::rng(params.seed);
    let mut inside = random_subset(&mut rng, n, k);
    let mut outside: Vec<usize> = {
        let mut mask = vec![true; n];
        for &i in &inside {
            mask[i] = false;
        }
        (0..n).filter(|&i| mask[i]).collect()
    };
    gather(&inside, &mut buf);
    let mut current = objective.eval(&buf, w);

    let k1_max = (k / 2).min((n - k) / 2).max(1);
    let mut candidate = inside.clone();
    let mut temperature = params.t_ini;
    while temperature > params.t_end {
        for _ in 0..params.r {
            let k1 = rng.random_range(1..=k1_max);
            let leave = index::sample(&mut rng, k, k1);
            let enter = index::sample(&mut rng, n - k, k1);
            candidate.copy_from_slice(&inside);
            for (a, b) in leave.iter().zip(enter.iter()) {
                candidate[a] = outside[b];
            }
            gather(&candidate, &mut buf);
            let g = objective.eval(&buf, w);
            let delta = g - current;
            let accept = delta >= 0.0 || rng.random::<f64>() < (delta / temperature).exp();
            if accept {
                for (a, b) in leave.iter().zip(enter.iter()) {
                    std::mem::swap(&mut inside[a], &mut outside[b]);
                }
                current = g;
            }
        }
        temperature *= params.c;
    }
    Ok(SelectionResult::build(pool, w, inside, current, objective.method(), started))
}
