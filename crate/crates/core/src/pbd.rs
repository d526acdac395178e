//! Poisson-Binomial window probabilities.
//!
//! The number of positive opinions in a crowd is the sum `T` of independent,
//! non-identical Bernoulli variables. This module computes `Pr(T = i)` exactly
//! (subset enumeration and the characteristic-function DFT), the demand
//! window probability `Pr(theta1 <= T <= theta2)`, and the Poisson, Binomial
//! and Normal surrogates used by the approximate selectors together with
//! their closed-form peak locations and the classical approximation error
//! bounds.

use num_complex::Complex64;
use statrs::function::erf::erfc;
use statrs::function::factorial::ln_binomial;
use statrs::function::gamma::ln_gamma;

use crate::{Error, Result};

/// Largest vector accepted by [`pmf_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 25;

/// Largest imaginary residue tolerated in the DFT-CF output.
const IMAG_TOLERANCE: f64 = 1e-9;

/// Per-worker probabilities of holding a positive opinion.
#[derive(Debug, Clone, PartialEq)]
pub struct OpinionVector(Vec<f64>);

impl OpinionVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty("opinion vector"));
        }
        check_probabilities(&probs)?;
        Ok(OpinionVector(probs))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn stats(&self) -> ApproximationStats {
        ApproximationStats::from_probs(&self.0)
    }
}

pub(crate) fn check_probabilities(probs: &[f64]) -> Result<()> {
    match probs.iter().position(|p| !(0.0..=1.0).contains(p)) {
        Some(index) => Err(Error::ProbabilityOutOfRange { index, value: probs[index] }),
        None => Ok(()),
    }
}

/// A demand of at least `theta1` positive and `theta0` negative opinions
/// among `k` workers, i.e. `theta1 <= T <= theta2` with `theta2 = k - theta0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DemandWindow {
    k: usize,
    theta1: usize,
    theta0: usize,
}

impl DemandWindow {
    pub fn new(k: usize, theta1: usize, theta0: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("crowd size k must be positive"));
        }
        if theta1 + theta0 > k {
            return Err(Error::InfeasibleDemand { k, theta1, theta0 });
        }
        Ok(DemandWindow { k, theta1, theta0 })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn theta1(&self) -> usize {
        self.theta1
    }

    pub fn theta0(&self) -> usize {
        self.theta0
    }

    pub fn theta2(&self) -> usize {
        self.k - self.theta0
    }

    pub fn is_degenerate(&self) -> bool {
        self.theta1 == self.theta2()
    }
}

/// Exact distribution of `T` over `0..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfTable {
    mass: Vec<f64>,
}

impl PmfTable {
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.mass
    }

    /// `Pr(lo <= T <= hi)`, both ends inclusive.
    pub fn window(&self, lo: usize, hi: usize) -> f64 {
        if lo > hi || lo >= self.mass.len() {
            return 0.0;
        }
        let hi = hi.min(self.mass.len() - 1);
        self.mass[lo..=hi].iter().sum()
    }

    pub fn cdf(&self, i: usize) -> f64 {
        self.window(0, i)
    }
}

/// Moments shared by the Poisson, Binomial and Normal surrogates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproximationStats {
    pub lambda: f64,
    pub mu: f64,
    pub sigma: f64,
    pub p_bar: f64,
}

impl ApproximationStats {
    pub fn from_probs(probs: &[f64]) -> Self {
        let lambda: f64 = probs.iter().sum();
        let var: f64 = probs.iter().map(|p| p * (1.0 - p)).sum();
        let p_bar = if probs.is_empty() { 0.0 } else { lambda / probs.len() as f64 };
        ApproximationStats { lambda, mu: lambda, sigma: var.max(0.0).sqrt(), p_bar }
    }
}

/// Exact PMF by enumerating every subset of positive workers.
///
/// Exponential in the input length; kept as the reference the other
/// routes are checked against.
pub fn pmf_bruteforce(p: &OpinionVector) -> Result<PmfTable> {
    let probs = p.probs();
    let n = probs.len();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::SizeLimit { len: n, limit: BRUTEFORCE_LIMIT });
    }
    let mut mass = vec![0.0; n + 1];
    for subset in 0u64..(1u64 << n) {
        let weight: f64 =
            probs.iter().enumerate().map(|(j, &pj)| if subset >> j & 1 == 1 { pj } else { 1.0 - pj }).product();
        mass[subset.count_ones() as usize] += weight;
    }
    Ok(PmfTable { mass })
}

/// Exact PMF by inverting the characteristic function on the `k + 1`
/// roots of unity.
pub fn pmf_dftcf(p: &OpinionVector) -> PmfTable {
    PmfTable { mass: dftcf_mass(p.probs()) }
}

pub(crate) fn dftcf_mass(probs: &[f64]) -> Vec<f64> {
    let k = probs.len();
    let m = k + 1;
    let omega = std::f64::consts::TAU / m as f64;
    // e^{-i omega j} for j in 0..m; every exponent below is reduced mod m.
    let twiddle: Vec<Complex64> = (0..m).map(|j| Complex64::from_polar(1.0, -omega * j as f64)).collect();

    // phi(omega l) = prod_j (1 - p_j + p_j e^{i omega l}); phi(m - l) = conj(phi(l)).
    let mut phi = vec![Complex64::new(0.0, 0.0); m];
    for l in 0..=m / 2 {
        let z = twiddle[l].conj();
        phi[l] = probs.iter().fold(Complex64::new(1.0, 0.0), |acc, &pj| acc * (z * pj + (1.0 - pj)));
        if l > 0 && l < m - l {
            phi[m - l] = phi[l].conj();
        }
    }

    (0..m)
        .map(|t0| {
            let sum =
                phi.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (l, &f)| acc + f * twiddle[(l * t0) % m]);
            let value = sum / m as f64;
            debug_assert!(value.im.abs() <= IMAG_TOLERANCE, "imaginary residue {}", value.im);
            value.re.clamp(0.0, 1.0)
        })
        .collect()
}

/// `Pr(theta1 <= T <= theta2)` for the selected crowd, via the DFT-CF PMF.
pub fn tau_exact(p: &OpinionVector, w: &DemandWindow) -> Result<f64> {
    if p.len() != w.k() {
        return Err(Error::LengthMismatch { got: p.len(), k: w.k() });
    }
    Ok(pmf_dftcf(p).window(w.theta1(), w.theta2()))
}

/// Same as [`tau_exact`] on a raw probability slice of length `w.k()`.
pub(crate) fn tau_of(probs: &[f64], w: &DemandWindow) -> f64 {
    debug_assert_eq!(probs.len(), w.k());
    let mass = dftcf_mass(probs);
    mass[w.theta1()..=w.theta2()].iter().sum()
}

/// Poisson window surrogate `F_P(theta2, lambda) - F_P(theta1, lambda)`,
/// i.e. `e^-lambda * sum_{i = theta1 + 1}^{theta2} lambda^i / i!`.
pub fn g_poisson(lambda: f64, w: &DemandWindow) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::param(format!("Poisson rate must be non-negative, got {lambda}")));
    }
    Ok(poisson_range(lambda, w.theta1() + 1, w.theta2()))
}

/// `sum_{i = lo}^{hi} e^-lambda lambda^i / i!`.
fn poisson_range(lambda: f64, lo: usize, hi: usize) -> f64 {
    if lo > hi {
        return 0.0;
    }
    if lambda == 0.0 {
        return if lo == 0 { 1.0 } else { 0.0 };
    }
    let mut term = poisson_pmf(lo, lambda);
    let mut total = term;
    for i in lo + 1..=hi {
        term *= lambda / i as f64;
        total += term;
    }
    total
}

pub fn poisson_pmf(i: usize, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return if i == 0 { 1.0 } else { 0.0 };
    }
    (-lambda + i as f64 * lambda.ln() - ln_gamma(i as f64 + 1.0)).exp()
}

pub fn poisson_cdf(i: usize, lambda: f64) -> f64 {
    poisson_range(lambda, 0, i).min(1.0)
}

/// Rate at which [`g_poisson`] peaks: `(theta2! / theta1!)^(1 / (theta2 - theta1))`.
pub fn peak_poisson(w: &DemandWindow) -> Result<f64> {
    let (t1, t2) = (w.theta1(), w.theta2());
    if t1 == t2 {
        return Err(Error::DegenerateWindow(t1));
    }
    let log_ratio = ln_gamma(t2 as f64 + 1.0) - ln_gamma(t1 as f64 + 1.0);
    Ok((log_ratio / (t2 - t1) as f64).exp())
}

pub fn binomial_pmf(i: usize, n: usize, p: f64) -> f64 {
    if i > n {
        return 0.0;
    }
    if p == 0.0 {
        return if i == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if i == n { 1.0 } else { 0.0 };
    }
    (ln_binomial(n as u64, i as u64) + i as f64 * p.ln() + (n - i) as f64 * (1.0 - p).ln()).exp()
}

/// Binomial window surrogate `F_B(theta2; n, p) - F_B(theta1; n, p)`,
/// i.e. `Pr(theta1 < X <= theta2)` for `X ~ Binomial(n, p_bar)`.
pub fn g_binomial(p_bar: f64, n: usize, w: &DemandWindow) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_bar) {
        return Err(Error::param(format!("Binomial success probability must lie in [0, 1], got {p_bar}")));
    }
    if n < w.theta2() {
        return Err(Error::param(format!("Binomial size {n} is below theta2 = {}", w.theta2())));
    }
    Ok((w.theta1() + 1..=w.theta2()).map(|i| binomial_pmf(i, n, p_bar)).sum())
}

/// Success probability `p_star` at which [`g_binomial`] peaks, and the
/// knapsack capacity `omega_b = k * p_star`.
pub fn peak_binomial(n: usize, w: &DemandWindow) -> Result<(f64, f64)> {
    let (t1, t2) = (w.theta1(), w.theta2());
    if t1 == t2 {
        return Err(Error::DegenerateWindow(t1));
    }
    if n < t2 {
        return Err(Error::param(format!("Binomial size {n} is below theta2 = {t2}")));
    }
    let p_star = if n == t2 {
        1.0
    } else {
        // ((n - t2) C(n, t2)) / ((n - t1) C(n, t1)), in log space.
        let log_ratio = ((n - t2) as f64).ln() + ln_binomial(n as u64, t2 as u64)
            - ((n - t1) as f64).ln()
            - ln_binomial(n as u64, t1 as u64);
        1.0 / (1.0 + (log_ratio / (t2 - t1) as f64).exp())
    };
    Ok((p_star, w.k() as f64 * p_star))
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Continuity-corrected Normal window
/// `F_N(theta2 + 0.5; mu, sigma) - F_N(theta1 - 0.5; mu, sigma)`.
///
/// A zero `sigma` is treated as a point mass at `mu`.
pub fn g_normal(stats: &ApproximationStats, w: &DemandWindow) -> f64 {
    let lo = w.theta1() as f64 - 0.5;
    let hi = w.theta2() as f64 + 0.5;
    let (mu, sigma) = (stats.mu, stats.sigma);
    if sigma <= 0.0 {
        return if lo < mu && mu <= hi { 1.0 } else { 0.0 };
    }
    (std_normal_cdf((hi - mu) / sigma) - std_normal_cdf((lo - mu) / sigma)).max(0.0)
}

/// Upper bound on `sup_i |Pr(T <= i) - F_P(i, mu)|`:
/// `min(1/mu, 1) * sum p_j^2`.
pub fn poisson_error_bound(p: &OpinionVector) -> f64 {
    let mu: f64 = p.probs().iter().sum();
    let sq: f64 = p.probs().iter().map(|x| x * x).sum();
    if mu == 0.0 {
        return 0.0;
    }
    (1.0 / mu).min(1.0) * sq
}

/// Upper bound on the total-variation distance between `T` and
/// `Binomial(n, p_bar)`.
pub fn binomial_error_bound(p: &OpinionVector) -> f64 {
    let probs = p.probs();
    let n = probs.len();
    let p_bar = probs.iter().sum::<f64>() / n as f64;
    let dispersion: f64 = probs.iter().map(|x| (x - p_bar).powi(2)).sum();
    let q_bar = 1.0 - p_bar;
    if p_bar <= 0.0 || q_bar <= 0.0 {
        return 0.0;
    }
    let prefactor = (1.0 - p_bar.powi(n as i32 + 1) - q_bar.powi(n as i32 + 1)) / ((n + 1) as f64 * p_bar * q_bar);
    prefactor * dispersion
}
